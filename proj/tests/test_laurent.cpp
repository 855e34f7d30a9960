#include <random>

#include "doctest.h"
#include "slicekit/errors.hpp"
#include "slicekit/laurent.hpp"
#include "slicekit/matrix.hpp"

using namespace slicekit;

namespace {

LaurentPoly P(const char* s) { return parse_laurent(s); }

LaurentPoly random_poly(std::mt19937_64& rng, int max_deg, int height) {
    std::uniform_int_distribution<int> d(0, max_deg), c(-height, height);
    int n = d(rng);
    std::vector<Rational> coeffs(static_cast<std::size_t>(n + 1));
    for (auto& x : coeffs) x = c(rng);
    if (coeffs.back() == 0) coeffs.back() = 1;
    if (coeffs.front() == 0) coeffs.front() = -1;  // t is a unit in the Laurent ring
    return LaurentPoly(0, coeffs);
}

// Sylvester matrix of two polynomials viewed in Q[t]; rank = deg f + deg g - deg gcd.
QMatrix sylvester(const LaurentPoly& f, const LaurentPoly& g) {
    int m = poly_degree(f), n = poly_degree(g);
    QMatrix s(static_cast<std::size_t>(m + n), static_cast<std::size_t>(m + n), Rational(0));
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s(static_cast<std::size_t>(r), static_cast<std::size_t>(r + k)) = f.coeff(m - k);
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s(static_cast<std::size_t>(n + r), static_cast<std::size_t>(r + k)) = g.coeff(n - k);
    return s;
}

}  // namespace

TEST_CASE("laurent: parse and render round trip") {
    CHECK(P("2*t^2 - 5*t + 2").to_string() == "2*t^2 - 5*t + 2");
    CHECK(P("t^-1 - 2").to_string() == "-2 + t^-1");
    CHECK(P("-t").to_string() == "-t");
    CHECK(P("1/2*t^3 + t^(-2)").coeff(-2) == 1);
    CHECK(P("3t").coeff(1) == 3);
    CHECK(P("0").is_zero());
    CHECK_THROWS_AS(P("2**t"), Error);
    CHECK_THROWS_AS(P(""), Error);
}

TEST_CASE("laurent: normalize") {
    CHECK(normalize(P("-2*t^2 + 5*t - 2")) == P("2*t^2 - 5*t + 2"));
    CHECK(normalize(P("t^-1 - 2")) == P("2*t - 1"));
    CHECK(normalize(P("7")) == P("1"));
    CHECK(normalize(P("1/2*t^3 - 1/3*t^2")) == P("3*t - 2"));
    CHECK_THROWS_AS(normalize(LaurentPoly()), Error);
    auto e = [] {
        try {
            normalize(LaurentPoly());
        } catch (const Error& err) {
            return err.kind();
        }
        return ErrorKind::InvalidArgument;
    }();
    CHECK(e == ErrorKind::ZeroPolynomial);
}

TEST_CASE("laurent: gcd examples") {
    CHECK(gcd(P("2*t^2-5*t+2"), LaurentPoly()) == P("2*t^2-5*t+2"));
    CHECK(gcd(P("2*t^2-5*t+2"), P("2*t-1")) == P("2*t-1"));
    CHECK(gcd(P("t^2-t+1"), P("t-2")) == P("1"));
}

TEST_CASE("laurent: conjugate") {
    CHECK(conjugate(P("t-2")) == P("2*t-1"));
    CHECK(conjugate(P("t^2-t+1")) == P("t^2-t+1"));
    CHECK(conjugate(P("5")) == P("1"));
}

TEST_CASE("laurent: factor examples") {
    auto f = factor(P("2*t^2-5*t+2"));
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == P("t-2"));
    CHECK(f.factors[1].first == P("2*t-1"));
    CHECK(factor(P("t^2-t+1")).factors.size() == 1);
    CHECK(factor(P("t-1")).factors.size() == 1);
    // (t^2+1)^2 (t^3-t-1) (3t-2)
    LaurentPoly big = P("t^2+1") * P("t^2+1") * P("t^3-t-1") * P("3*t-2") * P("-5*t^-3");
    auto fb = factor(big);
    CHECK(fb.expand() == big);
    CHECK(fb.factors.size() == 3);
    // Swinnerton-Dyer style: x^4 - 10x^2 + 1 is irreducible but splits modulo every prime.
    CHECK(factor(P("t^4 - 10*t^2 + 1")).factors.size() == 1);
    // Product of two quartics that each split mod small primes.
    LaurentPoly q = P("t^4 - 10*t^2 + 1") * P("t^4 - 4*t^2 + 1") * P("t^3 - 2");
    auto fq = factor(q);
    CHECK(fq.factors.size() == 3);
    CHECK(fq.expand() == q);
    CHECK_THROWS_AS(factor(LaurentPoly::monomial(1, 40) + LaurentPoly(1)), Error);
}

TEST_CASE("laurent: fox-milnor examples") {
    CHECK(fox_milnor(P("2*t^2-5*t+2")));
    CHECK_FALSE(fox_milnor(P("t^2-t+1")));
    CHECK(fox_milnor(P("1")));
    CHECK(fox_milnor(P("t^2-t+1") * P("t^2-t+1")));
}

TEST_CASE("laurent: reduce_mod handles negative powers") {
    LaurentPoly d = P("2*t^2-5*t+2");
    LaurentPoly p = P("t^-3 + 4*t^5 - 1");
    LaurentPoly r = reduce_mod(p, d);
    CHECK(poly_degree(r) < 2);
    // p - r must be divisible by d in the Laurent ring.
    CHECK(divides(d, p - r));
}

TEST_CASE("laurent property: normalize is multiplicative and idempotent") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        LaurentPoly p = random_poly(rng, 6, 10).shifted(static_cast<int>(rng() % 7) - 3);
        LaurentPoly q = random_poly(rng, 6, 10).shifted(static_cast<int>(rng() % 7) - 3);
        CHECK(normalize(p * q) == normalize(normalize(p) * normalize(q)));
        CHECK(normalize(normalize(p)) == normalize(p));
        CHECK(conjugate(conjugate(p)) == normalize(p));
    }
}

TEST_CASE("laurent property: gcd agrees with Sylvester-rank oracle") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 300; ++i) {
        LaurentPoly common = random_poly(rng, 2, 4);
        LaurentPoly f = random_poly(rng, 4, 10), g = random_poly(rng, 4, 10);
        if (i % 2 == 0) {
            f *= common;
            g *= common;
        }
        if (poly_degree(f) < 1 || poly_degree(g) < 1) continue;
        LaurentPoly h = gcd(f, g);
        CHECK(divides(h, f));
        CHECK(divides(h, g));
        int expected = poly_degree(f) + poly_degree(g) - static_cast<int>(rank(sylvester(f, g)));
        CHECK(poly_degree(h) == expected);
        // resultant vanishes exactly when a common factor exists
        CHECK((determinant(sylvester(f, g)) == 0) == (poly_degree(h) > 0));
    }
}

TEST_CASE("laurent property: factor recomposes and fox-milnor holds on f*conj(f)") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        LaurentPoly f = random_poly(rng, 4, 10);
        if (f.is_zero()) continue;
        auto fac = factor(f);
        CHECK(fac.expand() == f);
        for (const auto& [q, m] : fac.factors) CHECK(q == normalize(q));
        CHECK(fox_milnor(f * f.involute()));
    }
}
