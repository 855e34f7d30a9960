#include <Eigen/Dense>
#include <chrono>
#include <complex>

#include "doctest.h"
#include "slicekit/errors.hpp"
#include "test_support.hpp"

using namespace slicekit;
using testsupport::random_cayley;
using testsupport::random_seifert;

namespace {

LaurentPoly P(const char* s) { return parse_laurent(s); }

// Torus knot Alexander polynomial (t^{pq}-1)(t-1) / ((t^p-1)(t^q-1)).
LaurentPoly torus_delta(long p, long q) {
    auto tk = [](long k) { return LaurentPoly::monomial(1, static_cast<int>(k)) - LaurentPoly(1); };
    return normalize(exact_quotient(tk(p * q) * tk(1), tk(p) * tk(q)));
}

template <class Real>
int float_signature(const SeifertMatrix& v, const Rational& s, int exact_nullity, bool& certified) {
    using C = std::complex<Real>;
    const auto n = static_cast<Eigen::Index>(v.size());
    Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
    Real sd = static_cast<Real>(s.get_d());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            Real a = static_cast<Real>(v(i, j).get_d()), b = static_cast<Real>(v(j, i).get_d());
            m(i, j) = C(sd * (a + b), -(a - b));
        }
    Eigen::SelfAdjointEigenSolver<decltype(m)> es(m, Eigen::EigenvaluesOnly);
    std::vector<Real> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(ev.begin(), ev.end(), [](Real a, Real b) { return std::abs(a) < std::abs(b); });
    Real scale = 1;
    for (Real e : ev) scale = std::max(scale, std::abs(e));
    Real tol = scale * std::numeric_limits<Real>::epsilon() * 1000;
    certified = true;
    int sig = 0;
    for (std::size_t k = 0; k < ev.size(); ++k) {
        if (static_cast<int>(k) < exact_nullity) {
            if (std::abs(ev[k]) > tol) certified = false;
            continue;
        }
        if (std::abs(ev[k]) <= tol) certified = false;
        sig += ev[k] > 0 ? 1 : -1;
    }
    return s > 0 ? sig : -sig;
}

int exact_nullity(const SeifertMatrix& v, const Rational& s) {
    const std::size_t n = v.size();
    QMatrix big(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational a = s * Rational(v(i, j) + v(j, i));
            Rational b = -Rational(v(i, j) - v(j, i));
            big(i, j) = a;
            big(n + i, n + j) = a;
            big(i, n + j) = -b;
            big(n + i, j) = b;
        }
    return static_cast<int>(2 * n - rank(big)) / 2;
}

}  // namespace

TEST_CASE("seifert: constructors keep the symplectic convention") {
    CHECK(twist_knot(2).matrix() == IntMatrix{{Integer(2), Integer(1)}, {Integer(0), Integer(-1)}});
    CHECK_THROWS_AS(SeifertMatrix(IntMatrix{{Integer(0), Integer(1)}, {Integer(2), Integer(0)}}), Error);
    // The literal band matrix [[0,l],[l+1,tw]] has V - V^T = -J; rebasing flips one basis vector.
    IntMatrix raw{{Integer(0), Integer(1)}, {Integer(2), Integer(0)}};
    CHECK(alexander_poly(rebase(raw)) == alexander_poly(genus_one(1, 0)));
    CHECK(connected_sum(twist_knot(3), SeifertMatrix()) == twist_knot(3));
    CHECK(mirror(mirror(twist_knot(5))) == twist_knot(5));
}

TEST_CASE("seifert: Alexander polynomials of the families") {
    CHECK(alexander_poly(SeifertMatrix()) == P("1"));
    CHECK(alexander_poly(twist_knot(2)) == P("2*t^2-5*t+2"));
    CHECK(alexander_poly(twist_knot(0)).is_unit());
    CHECK(alexander_poly(twist_knot(1)) == P("t^2-3*t+1"));
    CHECK(alexander_poly(twist_knot(-1)) == P("t^2-t+1"));
    CHECK(alexander_poly(genus_one(1, 0)) == P("2*t^2-5*t+2"));
    CHECK(alexander_poly(genus_one(0, 0)).is_unit());
    for (long tw = -3; tw <= 3; ++tw) CHECK(alexander_poly(genus_one(-1, tw)).is_unit());
    CHECK(alexander_poly(connected_sum(genus_one(1, 0), genus_one(2, 0))) ==
          normalize(P("t-2") * P("2*t-1") * P("2*t-3") * P("3*t-2")));
}

TEST_CASE("seifert: torus knots") {
    auto t23 = torus_knot(2, 3);
    CHECK(t23.genus() == 1);
    CHECK(alexander_poly(t23) == P("t^2-t+1"));
    CHECK(lt_signature(t23, UnitCirclePoint::at_minus_one()) == -2);
    CHECK(torus_knot(2, -1).genus() == 0);
    CHECK(lt_signature(torus_knot(3, -2), UnitCirclePoint::at_minus_one()) == 2);
    CHECK_THROWS_AS(torus_knot(2, 4), Error);
    // Classical signatures of positive torus knots.
    CHECK(lt_signature(torus_knot(2, 5), UnitCirclePoint::at_minus_one()) == -4);
    CHECK(lt_signature(torus_knot(2, 7), UnitCirclePoint::at_minus_one()) == -6);
    CHECK(lt_signature(torus_knot(3, 4), UnitCirclePoint::at_minus_one()) == -6);
    CHECK(lt_signature(torus_knot(3, 5), UnitCirclePoint::at_minus_one()) == -8);
    for (auto [p, q] : std::vector<std::pair<long, long>>{{2, 5}, {3, 4}, {3, 5}, {4, 5}, {2, 9}}) {
        auto v = torus_knot(p, q);
        CHECK(v.genus() == (p - 1) * (q - 1) / 2);
        CHECK(alexander_poly(v) == torus_delta(p, q));
    }
}

TEST_CASE("seifert: Levine-Tristram signature examples") {
    CHECK(lt_signature(SeifertMatrix(), UnitCirclePoint::cayley(3)) == 0);
    CHECK(lt_signature(torus_knot(2, 3), UnitCirclePoint::cayley(1)) == -2);
    CHECK(lt_signature(torus_knot(2, 3), UnitCirclePoint::cayley(0)) == 0);
    // [[-2, 1-i], [1+i, -2]] by hand: determinant 2, trace -4.
    QMatrix re{{Rational(-2), Rational(1)}, {Rational(1), Rational(-2)}};
    QMatrix im{{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}};
    CHECK(hermitian_signature(re, im) == -2);
}

TEST_CASE("seifert: jump sets") {
    CHECK(jump_set(twist_knot(2)).empty());
    CHECK(jump_set(SeifertMatrix()).empty());
    auto j = jump_set(torus_knot(2, 3));
    REQUIRE(j.size() == 1);
    CHECK(j[0].x.lo <= 1);
    CHECK(j[0].x.hi >= 1);
    CHECK(j[0].multiplicity == 1);
    // (t^2 - t + 1)^2: one jump of multiplicity two.
    auto jj = jump_set(connected_sum(torus_knot(2, 3), torus_knot(2, 3)));
    REQUIRE(jj.size() == 1);
    CHECK(jj[0].multiplicity == 2);
    // T(2,5): x^2 - x - 1 has two roots in (-2, 2), each isolated below 2^-32.
    auto j5 = jump_set(torus_knot(2, 5));
    REQUIRE(j5.size() == 2);
    for (const auto& p : j5) CHECK(p.x.width() < Rational(1, Integer(1) << 32));
}

TEST_CASE("seifert: rho0 examples") {
    auto t0 = std::chrono::steady_clock::now();
    Rational eps(1, 1000000000);
    auto u = rho0(SeifertMatrix(), eps);
    CHECK(u.mid == 0);
    CHECK(u.rad == 0);
    auto tr = rho0(torus_knot(2, 3), eps);
    CHECK(tr.contains(Rational(-4, 3)));
    CHECK(tr.rad <= eps);
    auto tw = rho0(twist_knot(2), eps);
    CHECK(tw.mid == 0);
    CHECK(tw.rad == 0);
    // T(2,5): sigma = -2 on (pi/5, 3pi/5), -4 on (3pi/5, pi): rho0 = -2*(2/5) - 4*(2/5) = -12/5.
    auto t25 = rho0(torus_knot(2, 5), Rational(1, Integer(1) << 60));
    CHECK(t25.contains(Rational(-12, 5)));
    CHECK(t25.rad <= Rational(1, Integer(1) << 60));
    auto mt = rho0(mirror(torus_knot(2, 5)), eps);
    CHECK(mt.contains(Rational(12, 5)));
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(dt < 2.0);
}

TEST_CASE("seifert: signature function CSV") {
    auto f = signature_function(torus_knot(2, 3), Rational(1, 1000000));
    REQUIRE(f.arcs.size() == 2);
    CHECK(f.arcs[0].sigma == 0);
    CHECK(f.arcs[1].sigma == -2);
    CHECK(f.arcs[1].theta_lo.mid == Rational(1, 3));
    std::string csv = signature_csv(f);
    CHECK(csv.find("theta_lo,theta_hi,sigma") == 0);
    CHECK(csv.find("x_lo,x_hi,multiplicity") != std::string::npos);
}

TEST_CASE("seifert: matrix text format") {
    auto v = torus_knot(3, 4);
    CHECK(parse_matrix_text(to_matrix_text(v)) == v);
    CHECK(parse_matrix_text("1\n 0 1\n 2 0\n").genus() == 1);
    CHECK_THROWS_AS(parse_matrix_text("1\n 0 1 2"), Error);
}

TEST_CASE("seifert property: signature additivity under block sum") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 150; ++i) {
        auto a = random_seifert(rng, 1 + static_cast<int>(rng() % 2), 4);
        auto b = random_seifert(rng, 1 + static_cast<int>(rng() % 2), 4);
        auto s = random_cayley(rng);
        auto w = UnitCirclePoint::cayley(s);
        CHECK(lt_signature(connected_sum(a, b), w) == lt_signature(a, w) + lt_signature(b, w));
        auto m1 = UnitCirclePoint::at_minus_one();
        CHECK(lt_signature(connected_sum(a, b), m1) == lt_signature(a, m1) + lt_signature(b, m1));
    }
}

TEST_CASE("seifert property: mirror antisymmetry") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 150; ++i) {
        auto a = random_seifert(rng, 1 + static_cast<int>(rng() % 3), 5);
        auto w = UnitCirclePoint::cayley(random_cayley(rng));
        CHECK(lt_signature(mirror(a), w) == -lt_signature(a, w));
    }
    for (int i = 0; i < 20; ++i) {
        auto a = random_seifert(rng, 1 + static_cast<int>(rng() % 2), 3);
        auto r = rho0(a, Rational(1, 1000000));
        auto m = rho0(mirror(a), Rational(1, 1000000));
        CHECK(m.contains(-r.mid));
        CHECK(connected_sum(a, mirror(a)).genus() == 2 * a.genus());
        for (int k = 0; k < 5; ++k)
            CHECK(lt_signature(connected_sum(a, mirror(a)), UnitCirclePoint::cayley(random_cayley(rng))) == 0);
    }
}

TEST_CASE("seifert property: signature is constant between jumps") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        auto v = random_seifert(rng, 1 + static_cast<int>(rng() % 3), 5);
        auto f = signature_function(v, Rational(1, 1000));
        std::vector<RootInterval> interior;
        for (const auto& j : f.jumps)
            if (!(j.x.exact() && abs(j.x.lo) == 2)) interior.push_back(j.x);
        std::sort(interior.begin(), interior.end(), [](const auto& a, const auto& b) { return a.lo > b.lo; });
        REQUIRE(f.arcs.size() == interior.size() + 1);
        for (std::size_t k = 0; k < f.arcs.size(); ++k) {
            Rational x_hi = k == 0 ? Rational(2) : interior[k - 1].lo;
            Rational x_lo = k == interior.size() ? Rational(-2) : interior[k].hi;
            std::uniform_int_distribution<int> frac(1, 99);
            for (int rep = 0; rep < 2; ++rep) {
                Rational target = x_lo + (x_hi - x_lo) * Rational(frac(rng), 100);
                // x(s) = 2(1-s^2)/(1+s^2) is decreasing in s > 0; bisect toward target.
                Rational lo = 0, hi = 1;
                while (UnitCirclePoint::cayley(hi).x() > target) hi *= 2;
                Rational s = hi;
                for (int it = 0; it < 400; ++it) {
                    Rational xm = UnitCirclePoint::cayley(s).x();
                    if (xm > x_lo && xm < x_hi && s > 0) break;
                    s = (lo + hi) / 2;
                    if (UnitCirclePoint::cayley(s).x() > target)
                        lo = s;
                    else
                        hi = s;
                }
                Rational xs = UnitCirclePoint::cayley(s).x();
                REQUIRE(xs > x_lo);
                REQUIRE(xs < x_hi);
                CHECK(lt_signature(v, UnitCirclePoint::cayley(s)) == f.arcs[k].sigma);
                CHECK(lt_signature(v, UnitCirclePoint::cayley(-s)) == f.arcs[k].sigma);
            }
        }
    }
}

TEST_CASE("seifert property: S-equivalence invariance") {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 100; ++i) {
        auto v = random_seifert(rng, 1 + static_cast<int>(rng() % 2), 4);
        auto w = testsupport::stabilize(v, rng);
        CHECK(associates(alexander_poly(v), alexander_poly(w)));
        for (int k = 0; k < 50; ++k) {
            auto p = UnitCirclePoint::cayley(random_cayley(rng));
            CHECK(lt_signature(v, p) == lt_signature(w, p));
        }
    }
}

TEST_CASE("seifert property: exact signature engine vs floating eigenvalue oracle") {
    std::mt19937_64 rng(25);
    int certified_cases = 0;
    for (int i = 0; i < 1000; ++i) {
        auto v = random_seifert(rng, 1 + static_cast<int>(rng() % 3), 5);
        Rational s = random_cayley(rng);
        if (s == 0) s = 1;
        int exact = lt_signature(v, UnitCirclePoint::cayley(s));
        int null = exact_nullity(v, s);
        bool ok = false;
        int fl = float_signature<double>(v, s, null, ok);
        if (!ok) fl = float_signature<long double>(v, s, null, ok);
        REQUIRE(ok);
        ++certified_cases;
        CHECK(fl == exact);
    }
    CHECK(certified_cases == 1000);
}
