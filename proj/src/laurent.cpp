#include "slicekit/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "slicekit/errors.hpp"

namespace slicekit {

LaurentPoly::LaurentPoly(const Rational& c) {
    if (c != 0) coeffs_.push_back(c);
}

LaurentPoly::LaurentPoly(int low, std::vector<Rational> coeffs) : low_(low), coeffs_(std::move(coeffs)) { trim(); }

LaurentPoly LaurentPoly::monomial(const Rational& c, int exponent) {
    if (c == 0) return {};
    return LaurentPoly(exponent, {c});
}

LaurentPoly LaurentPoly::from_coeffs(const std::vector<long>& ascending) {
    std::vector<Rational> c;
    c.reserve(ascending.size());
    for (long v : ascending) c.emplace_back(v);
    return LaurentPoly(0, std::move(c));
}

void LaurentPoly::trim() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
        coeffs_.clear();
        low_ = 0;
        return;
    }
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
        low_ += static_cast<int>(lead);
    }
    while (coeffs_.back() == 0) coeffs_.pop_back();
}

Rational LaurentPoly::coeff(int exponent) const {
    if (is_zero() || exponent < low_ || exponent > high()) return 0;
    return coeffs_[static_cast<std::size_t>(exponent - low_)];
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly r = *this;
    if (!r.is_zero()) r.low_ += k;
    return r;
}

LaurentPoly LaurentPoly::involute() const {
    if (is_zero()) return {};
    std::vector<Rational> c(coeffs_.rbegin(), coeffs_.rend());
    return LaurentPoly(-high(), std::move(c));
}

Rational LaurentPoly::eval(const Rational& x) const {
    if (is_zero()) return 0;
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    if (low_ != 0) {
        if (x == 0) throw Error(ErrorKind::InvalidArgument, "evaluating a negative power at 0");
        Rational xp = 1;
        Rational base = low_ > 0 ? x : Rational(1 / x);
        for (int i = 0; i < std::abs(low_); ++i) xp *= base;
        acc *= xp;
    }
    return acc;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    int lo = std::min(low_, o.low_), hi = std::max(high(), o.high());
    std::vector<Rational> c(static_cast<std::size_t>(hi - lo + 1), Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i + static_cast<std::size_t>(low_ - lo)] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i + static_cast<std::size_t>(o.low_ - lo)] += o.coeffs_[i];
    low_ = lo;
    coeffs_ = std::move(c);
    trim();
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    if (is_zero() || o.is_zero()) return *this = LaurentPoly();
    std::vector<Rational> c(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    low_ += o.low_;
    coeffs_ = std::move(c);
    trim();
    return *this;
}

bool LaurentPoly::operator<(const LaurentPoly& o) const {
    if (span() != o.span()) return span() < o.span();
    if (low_ != o.low_) return low_ < o.low_;
    for (std::size_t k = coeffs_.size(); k-- > 0;)
        if (coeffs_[k] != o.coeffs_[k]) return coeffs_[k] < o.coeffs_[k];
    return false;
}

std::string LaurentPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int e = high(); e >= low_; --e) {
        Rational c = coeff(e);
        if (c == 0) continue;
        bool neg = c < 0;
        Rational a = abs_value(c);
        if (first)
            out << (neg ? "-" : "");
        else
            out << (neg ? " - " : " + ");
        first = false;
        if (e == 0) {
            out << slicekit::to_string(a);
            continue;
        }
        if (a != 1) out << slicekit::to_string(a) << "*";
        out << "t";
        if (e != 1) out << "^" << e;
    }
    return out.str();
}

LaurentPoly parse_laurent(std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw Error(ErrorKind::InvalidArgument, "empty polynomial");
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::InvalidArgument, "cannot parse polynomial '" + std::string(text) + "': " + why);
    };
    LaurentPoly acc;
    std::size_t i = 0;
    while (i < s.size()) {
        int sgn = 1;
        if (s[i] == '+' || s[i] == '-') {
            sgn = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            fail("expected + or -");
        }
        std::size_t start = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/' || s[i] == '.')) ++i;
        Rational c = 1;
        bool have_coeff = i > start;
        if (have_coeff) c = parse_rational(s.substr(start, i - start));
        if (i < s.size() && s[i] == '*') {
            if (!have_coeff) fail("dangling '*'");
            ++i;
            if (i >= s.size() || s[i] != 't') fail("expected t after '*'");
        }
        int e = 0;
        if (i < s.size() && s[i] == 't') {
            ++i;
            e = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                bool paren = i < s.size() && s[i] == '(';
                if (paren) ++i;
                std::size_t es = i;
                if (i < s.size() && s[i] == '-') ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == es || (i == es + 1 && s[es] == '-')) fail("missing exponent");
                e = std::stoi(s.substr(es, i - es));
                if (paren) {
                    if (i >= s.size() || s[i] != ')') fail("unbalanced parenthesis");
                    ++i;
                }
            }
        } else if (!have_coeff) {
            fail("empty term");
        }
        acc += LaurentPoly::monomial(sgn * c, e);
    }
    return acc;
}

LaurentPoly normalize(const LaurentPoly& p) {
    if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "normalize of the zero polynomial");
    Integer den = 1;
    for (const auto& c : p.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    Integer g = 0;
    for (const auto& c : p.coeffs()) {
        Integer v = c.get_num() * (den / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    Rational scale(den, g);
    scale.canonicalize();
    if (p.leading() < 0) scale = -scale;
    std::vector<Rational> c;
    c.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) c.emplace_back(x * scale);
    return LaurentPoly(0, std::move(c));
}

bool associates(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return normalize(a) == normalize(b);
}

int poly_degree(const LaurentPoly& p) {
    if (p.is_zero()) return -1;
    if (p.low() < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent in polynomial context");
    return p.high();
}

std::pair<LaurentPoly, LaurentPoly> poly_divmod(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "division by zero polynomial");
    int db = poly_degree(b);
    int da = poly_degree(a);
    if (da < db) return {LaurentPoly(), a};
    std::vector<Rational> r(static_cast<std::size_t>(da + 1), Rational(0));
    for (int e = a.low(); e <= da; ++e) r[static_cast<std::size_t>(e)] = a.coeff(e);
    std::vector<Rational> bc(static_cast<std::size_t>(db + 1), Rational(0));
    for (int e = b.low(); e <= db; ++e) bc[static_cast<std::size_t>(e)] = b.coeff(e);
    std::vector<Rational> q(static_cast<std::size_t>(da - db + 1), Rational(0));
    Rational inv = 1 / bc.back();
    for (int k = da - db; k >= 0; --k) {
        Rational f = r[static_cast<std::size_t>(k + db)] * inv;
        q[static_cast<std::size_t>(k)] = f;
        if (f == 0) continue;
        for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k + j)] -= f * bc[static_cast<std::size_t>(j)];
    }
    r.resize(static_cast<std::size_t>(db));
    return {LaurentPoly(0, std::move(q)), LaurentPoly(0, std::move(r))};
}

LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() && b.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "gcd(0, 0)");
    if (a.is_zero()) return normalize(b);
    if (b.is_zero()) return normalize(a);
    LaurentPoly x = normalize(a), y = normalize(b);
    while (!y.is_zero()) {
        LaurentPoly r = poly_divmod(x, y).second;
        x = y;
        y = r.is_zero() ? r : normalize(r);
    }
    return normalize(x);
}

LaurentPoly conjugate(const LaurentPoly& p) { return normalize(p.involute()); }

bool is_self_conjugate(const LaurentPoly& p) { return normalize(p) == conjugate(p); }

bool divides(const LaurentPoly& b, const LaurentPoly& a) {
    if (b.is_zero()) return a.is_zero();
    if (a.is_zero()) return true;
    return poly_divmod(a.shifted(-a.low()), b.shifted(-b.low())).second.is_zero();
}

LaurentPoly exact_quotient(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "division by zero polynomial");
    if (a.is_zero()) return {};
    auto [q, r] = poly_divmod(a.shifted(-a.low()), b.shifted(-b.low()));
    if (!r.is_zero()) throw Error(ErrorKind::InvalidArgument, "inexact polynomial division");
    return q.shifted(a.low() - b.low());
}

LaurentPoly reduce_mod(const LaurentPoly& p, const LaurentPoly& d) {
    if (d.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "reduction modulo zero");
    LaurentPoly dd = d.shifted(-d.low());
    if (poly_degree(dd) == 0 || p.is_zero()) return {};
    if (p.low() >= 0) return poly_divmod(p, dd).second;
    // t^-1 = -(d - d(0)) / (t d(0)) modulo d.
    Rational d0 = dd.coeff(0);
    LaurentPoly tinv = (dd - LaurentPoly(d0)).shifted(-1) * LaurentPoly(Rational(-1 / d0));
    LaurentPoly r = poly_divmod(p.shifted(-p.low()), dd).second;
    for (int k = 0; k < -p.low(); ++k) r = poly_divmod(r * tinv, dd).second;
    return r;
}

ExtGcd poly_ext_gcd(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r0 = a, r1 = b, s0 = 1, s1 = 0, u0 = 0, u1 = 1;
    while (!r1.is_zero()) {
        auto [q, r] = poly_divmod(r0, r1);
        r0 = r1;
        r1 = r;
        LaurentPoly s2 = s0 - q * s1, u2 = u0 - q * u1;
        s0 = s1;
        s1 = s2;
        u0 = u1;
        u1 = u2;
    }
    if (r0.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "ext_gcd(0, 0)");
    LaurentPoly inv = Rational(1 / r0.leading());
    return {r0 * inv, s0 * inv, u0 * inv};
}

LaurentPoly PrimeFactorization::expand() const {
    LaurentPoly acc = LaurentPoly::monomial(unit, t_power);
    for (const auto& [f, m] : factors)
        for (int k = 0; k < m; ++k) acc *= f;
    return acc;
}

std::vector<LaurentPoly> divisors(const PrimeFactorization& f) {
    std::vector<LaurentPoly> out{LaurentPoly(1)};
    for (const auto& [p, m] : f.factors) {
        std::vector<LaurentPoly> next;
        for (const auto& d : out) {
            LaurentPoly cur = d;
            for (int k = 0; k <= m; ++k) {
                next.push_back(cur);
                cur *= p;
            }
        }
        out = std::move(next);
    }
    for (auto& d : out) d = normalize(d);
    std::sort(out.begin(), out.end());
    return out;
}

bool fox_milnor(const LaurentPoly& p) {
    auto f = factor(p);
    for (const auto& [q, m] : f.factors) {
        LaurentPoly c = conjugate(q);
        if (c == q) {
            if (m % 2 != 0) return false;
            continue;
        }
        auto it = std::find_if(f.factors.begin(), f.factors.end(), [&](const auto& e) { return e.first == c; });
        if (it == f.factors.end() || it->second != m) return false;
    }
    return true;
}

}  // namespace slicekit
