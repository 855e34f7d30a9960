// Squarefree decomposition (Yun) followed by Zassenhaus: Cantor-Zassenhaus modulo a
// small prime, linear Hensel lifting, and subset recombination with trial division.
#include <algorithm>
#include <random>

#include "slicekit/errors.hpp"
#include "slicekit/laurent.hpp"

namespace slicekit {
namespace {

using ZPoly = std::vector<Integer>;  // ascending, trimmed
using PPoly = std::vector<long>;     // ascending, coefficients in [0, p)

// ---- small-prime polynomial arithmetic ----

void trim(PPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const PPoly& a) { return static_cast<int>(a.size()) - 1; }

long inv_mod(long a, long p) {
    long t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
    while (nr != 0) {
        long q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    return (t % p + p) % p;
}

PPoly sub(const PPoly& a, const PPoly& b, long p) {
    PPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = (c[i] - b[i] + p) % p;
    trim(c);
    return c;
}

PPoly mul(const PPoly& a, const PPoly& b, long p) {
    if (a.empty() || b.empty()) return {};
    PPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    trim(c);
    return c;
}

void divmod(const PPoly& a, const PPoly& b, long p, PPoly& q, PPoly& r) {
    r = a;
    q.clear();
    if (deg(a) < deg(b)) return;
    q.assign(a.size() - b.size() + 1, 0);
    long inv = inv_mod(b.back(), p);
    for (int k = deg(a) - deg(b); k >= 0; --k) {
        long f = r[static_cast<std::size_t>(k + deg(b))] * inv % p;
        q[static_cast<std::size_t>(k)] = f;
        if (f == 0) continue;
        for (int j = 0; j <= deg(b); ++j) {
            auto idx = static_cast<std::size_t>(k + j);
            r[idx] = ((r[idx] - f * b[static_cast<std::size_t>(j)]) % p + p) % p;
        }
    }
    trim(q);
    trim(r);
}

PPoly rem(const PPoly& a, const PPoly& b, long p) {
    PPoly q, r;
    divmod(a, b, p, q, r);
    return r;
}

PPoly quo(const PPoly& a, const PPoly& b, long p) {
    PPoly q, r;
    divmod(a, b, p, q, r);
    return q;
}

PPoly make_monic(PPoly a, long p) {
    if (a.empty()) return a;
    long inv = inv_mod(a.back(), p);
    for (auto& c : a) c = c * inv % p;
    return a;
}

PPoly gcd(PPoly a, PPoly b, long p) {
    while (!b.empty()) {
        PPoly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

// s*a + t*b = 1 for coprime a, b.
void ext_gcd(const PPoly& a, const PPoly& b, long p, PPoly& s, PPoly& t) {
    PPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
    while (!r1.empty()) {
        PPoly q, r;
        divmod(r0, r1, p, q, r);
        PPoly s2 = sub(s0, mul(q, s1, p), p), t2 = sub(t0, mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    long inv = inv_mod(r0.at(0), p);
    for (auto& c : s0) c = c * inv % p;
    for (auto& c : t0) c = c * inv % p;
    s = s0;
    t = t0;
}

PPoly powmod(PPoly base, const Integer& e, const PPoly& m, long p) {
    PPoly result{1};
    base = rem(base, m, p);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = rem(mul(result, result, p), m, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, base, p), m, p);
    }
    return result;
}

PPoly derivative(const PPoly& a, long p) {
    PPoly d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(static_cast<long>(i % static_cast<std::size_t>(p)) * a[i] % p);
    trim(d);
    return d;
}

PPoly reduce(const ZPoly& f, long p) {
    PPoly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        Integer m;
        mpz_fdiv_r_ui(m.get_mpz_t(), f[i].get_mpz_t(), static_cast<unsigned long>(p));
        r[i] = m.get_si();
    }
    trim(r);
    return r;
}

std::vector<PPoly> equal_degree(const PPoly& g, int d, long p, std::mt19937_64& rng) {
    if (deg(g) == d) return {g};
    Integer e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
    e = (e - 1) / 2;
    std::uniform_int_distribution<long> dist(0, p - 1);
    for (;;) {
        PPoly r(static_cast<std::size_t>(deg(g)));
        for (auto& c : r) c = dist(rng);
        trim(r);
        if (deg(r) < 1) continue;
        PPoly w = sub(powmod(r, e, g, p), PPoly{1}, p);
        PPoly u = gcd(w, g, p);
        if (deg(u) > 0 && deg(u) < deg(g)) {
            auto a = equal_degree(u, d, p, rng);
            auto b = equal_degree(quo(g, u, p), d, p, rng);
            a.insert(a.end(), b.begin(), b.end());
            return a;
        }
    }
}

// Monic squarefree f modulo odd prime p into monic irreducibles.
std::vector<PPoly> factor_mod_p(PPoly f, long p) {
    std::mt19937_64 rng(0x51CE + static_cast<unsigned long>(p));
    std::vector<PPoly> out;
    PPoly x{0, 1};
    PPoly h = x;
    for (int d = 1; 2 * d <= deg(f); ++d) {
        h = powmod(h, Integer(p), f, p);
        PPoly g = gcd(sub(h, x, p), f, p);
        if (deg(g) > 0) {
            auto parts = equal_degree(g, d, p, rng);
            out.insert(out.end(), parts.begin(), parts.end());
            f = quo(f, g, p);
            h = rem(h, f, p);
        }
    }
    if (deg(f) > 0) out.push_back(f);
    return out;
}

// ---- integer / p-adic helpers ----

void trim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly to_z(const PPoly& a) { return ZPoly(a.begin(), a.end()); }

ZPoly mul_mod(const ZPoly& a, const ZPoly& b, const Integer& m) {
    if (a.empty() || b.empty()) return {};
    ZPoly c(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    for (auto& v : c) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    trim(c);
    return c;
}

// Lifts f = g*h (mod p), g and h monic and coprime, to a factorization modulo p^k.
void hensel_pair(const ZPoly& f, ZPoly& g, ZPoly& h, long p, int k) {
    PPoly s, t;
    ext_gcd(reduce(g, p), reduce(h, p), p, s, t);
    Integer pj = p;
    for (int j = 1; j < k; ++j) {
        Integer next = pj * p;
        ZPoly gh = mul_mod(g, h, next);
        ZPoly e(std::max(f.size(), gh.size()), Integer(0));
        for (std::size_t i = 0; i < f.size(); ++i) e[i] = f[i];
        for (std::size_t i = 0; i < gh.size(); ++i) e[i] -= gh[i];
        for (auto& v : e) {
            mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), next.get_mpz_t());
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), pj.get_mpz_t());
        }
        trim(e);
        PPoly ep = reduce(e, p);
        PPoly gp = reduce(g, p), hp = reduce(h, p);
        PPoly te = mul(t, ep, p);
        PPoly q, tau;
        divmod(te, gp, p, q, tau);
        // sigma = s*e + (t*e quo g)*h, which has degree < deg h.
        PPoly sig = mul(s, ep, p);
        PPoly qh = mul(q, hp, p);
        sig.resize(std::max(sig.size(), qh.size()), 0);
        for (std::size_t i = 0; i < qh.size(); ++i) sig[i] = (sig[i] + qh[i]) % p;
        trim(sig);
        for (std::size_t i = 0; i < tau.size(); ++i) {
            if (i >= g.size()) g.resize(i + 1, Integer(0));
            g[i] += pj * tau[i];
        }
        for (std::size_t i = 0; i < sig.size(); ++i) {
            if (i >= h.size()) h.resize(i + 1, Integer(0));
            h[i] += pj * sig[i];
        }
        pj = next;
    }
}

Integer symmetric(const Integer& v, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    if (2 * r > m) r -= m;
    return r;
}

LaurentPoly from_z(const ZPoly& a) {
    std::vector<Rational> c(a.begin(), a.end());
    return LaurentPoly(0, std::move(c));
}

ZPoly to_zpoly(const LaurentPoly& f) {
    ZPoly z(static_cast<std::size_t>(f.high() + 1), Integer(0));
    for (int e = f.low(); e <= f.high(); ++e) z[static_cast<std::size_t>(e)] = f.coeff(e).get_num();
    return z;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<Integer> small_divisors(const Integer& n) {
    std::vector<Integer> out;
    Integer a = abs(n);
    for (Integer d = 1; d * d <= a; ++d)
        if (a % d == 0) {
            out.push_back(d);
            if (d * d != a) out.push_back(a / d);
        }
    return out;
}

// Canonical f (primitive, positive lead, f(0) != 0, squarefree) into irreducibles.
std::vector<LaurentPoly> factor_squarefree(LaurentPoly f) {
    std::vector<LaurentPoly> out;
    if (poly_degree(f) <= 0) return out;

    // Linear factors from rational roots when the end coefficients are small.
    ZPoly z = to_zpoly(f);
    if (abs(z.front()) < 1000000 && abs(z.back()) < 1000000) {
        auto nums = small_divisors(z.front());
        auto dens = small_divisors(z.back());
        for (const auto& a : nums)
            for (const auto& b : dens)
                for (int sg : {1, -1}) {
                    if (poly_degree(f) < 1) break;
                    Integer num = sg * a;
                    Integer g;
                    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), b.get_mpz_t());
                    if (g != 1) continue;
                    LaurentPoly lin(0, {Rational(-num), Rational(b)});
                    if (divides(lin, f)) {
                        out.push_back(normalize(lin));
                        f = normalize(exact_quotient(f, lin));
                    }
                }
    }
    if (poly_degree(f) <= 0) return out;
    if (poly_degree(f) == 1) {
        out.push_back(f);
        return out;
    }

    z = to_zpoly(f);
    const int n = poly_degree(f);
    const Integer lc = z.back();

    long best_p = 0;
    std::vector<PPoly> best;
    int tried = 0;
    for (long p = 3; p < 2000 && tried < 5; p += 2) {
        if (!is_prime(p) || lc % p == 0) continue;
        PPoly fp = reduce(z, p);
        if (deg(gcd(fp, derivative(fp, p), p)) > 0) continue;
        ++tried;
        auto fac = factor_mod_p(make_monic(fp, p), p);
        if (best_p == 0 || fac.size() < best.size()) {
            best_p = p;
            best = std::move(fac);
        }
        if (best.size() == 1) break;
    }
    if (best_p == 0) throw Error(ErrorKind::UnsupportedDegree, "no suitable prime for factorization");
    if (best.size() == 1) {
        out.push_back(f);
        return out;
    }

    // Coefficient bound for any factor, scaled by the leading coefficient.
    Integer norm1 = 0;
    for (const auto& c : z) norm1 += abs(c);
    Integer bound = abs(lc) * norm1;
    mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<unsigned long>(n));
    Integer modulus = best_p;
    int k = 1;
    while (modulus <= 2 * bound) {
        modulus *= best_p;
        ++k;
    }

    // Lift one factor at a time against the product of the rest.
    ZPoly fm = z;
    Integer lc_inv;
    mpz_invert(lc_inv.get_mpz_t(), lc.get_mpz_t(), modulus.get_mpz_t());
    for (auto& c : fm) {
        c *= lc_inv;
        mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), modulus.get_mpz_t());
    }
    std::vector<ZPoly> lifted;
    ZPoly rest = fm;
    for (std::size_t i = 0; i + 1 < best.size(); ++i) {
        PPoly others{1};
        for (std::size_t j = i + 1; j < best.size(); ++j) others = mul(others, best[j], best_p);
        ZPoly g = to_z(best[i]), h = to_z(others);
        hensel_pair(rest, g, h, best_p, k);
        for (auto& c : g) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), modulus.get_mpz_t());
        for (auto& c : h) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), modulus.get_mpz_t());
        lifted.push_back(g);
        rest = h;
    }
    lifted.push_back(rest);

    // Recombination.
    std::vector<std::size_t> remaining(lifted.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
    LaurentPoly cur = f;
    std::size_t s = 1;
    while (2 * s <= remaining.size()) {
        bool found = false;
        std::vector<std::size_t> pick(s);
        for (std::size_t i = 0; i < s; ++i) pick[i] = i;
        Integer lcur = cur.leading().get_num();
        while (true) {
            ZPoly cand{lcur};
            for (std::size_t idx : pick) cand = mul_mod(cand, lifted[remaining[idx]], modulus);
            for (auto& c : cand) c = symmetric(c, modulus);
            trim(cand);
            LaurentPoly g = from_z(cand);
            if (!g.is_zero() && poly_degree(g) > 0 && divides(g, cur)) {
                g = normalize(g);
                out.push_back(g);
                cur = normalize(exact_quotient(cur, g));
                std::vector<std::size_t> keep;
                for (std::size_t i = 0; i < remaining.size(); ++i)
                    if (std::find(pick.begin(), pick.end(), i) == pick.end()) keep.push_back(remaining[i]);
                remaining = std::move(keep);
                found = true;
                break;
            }
            // next combination
            std::size_t i = s;
            while (i > 0 && pick[i - 1] == remaining.size() - s + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
        }
        if (!found) ++s;
    }
    if (poly_degree(cur) > 0) out.push_back(cur);
    return out;
}

}  // namespace

std::vector<std::pair<LaurentPoly, int>> squarefree_decomposition(const LaurentPoly& p) {
    LaurentPoly f = normalize(p);
    std::vector<std::pair<LaurentPoly, int>> out;
    if (poly_degree(f) <= 0) return out;
    auto deriv = [](const LaurentPoly& a) {
        std::vector<Rational> c;
        for (int e = 1; e <= a.high(); ++e) c.emplace_back(a.coeff(e) * e);
        return LaurentPoly(0, std::move(c));
    };
    LaurentPoly fp = deriv(f);
    LaurentPoly a0 = gcd(f, fp);
    LaurentPoly b = exact_quotient(f, a0);
    LaurentPoly c = exact_quotient(fp, a0);
    LaurentPoly d = c - deriv(b);
    int i = 1;
    while (poly_degree(b) > 0) {
        LaurentPoly a = gcd(b, d);
        if (poly_degree(a) > 0) out.emplace_back(a, i);
        b = exact_quotient(b, a);
        c = exact_quotient(d, a);
        d = c - deriv(b);
        ++i;
    }
    return out;
}

PrimeFactorization factor(const LaurentPoly& p, int degree_bound) {
    if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "factor of the zero polynomial");
    if (p.span() > degree_bound)
        throw Error(ErrorKind::UnsupportedDegree,
                    "degree " + std::to_string(p.span()) + " exceeds bound " + std::to_string(degree_bound));
    PrimeFactorization out;
    out.t_power = p.low();
    for (const auto& [sq, m] : squarefree_decomposition(p))
        for (auto& irr : factor_squarefree(sq)) out.factors.emplace_back(irr, m);
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Rational lc = 1;
    for (const auto& [f, m] : out.factors)
        for (int k = 0; k < m; ++k) lc *= f.leading();
    out.unit = p.leading() / lc;
    return out;
}

}  // namespace slicekit
