#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slicekit/rational.hpp"

namespace slicekit {

/// Rational Laurent polynomial stored densely from its lowest exponent.
class LaurentPoly {
   public:
    LaurentPoly() = default;
    LaurentPoly(const Rational& c);  // NOLINT: constants convert implicitly
    LaurentPoly(long c) : LaurentPoly(Rational(c)) {}  // NOLINT
    LaurentPoly(int low, std::vector<Rational> coeffs);

    static LaurentPoly monomial(const Rational& c, int exponent);
    static LaurentPoly t() { return monomial(1, 1); }
    /// Ascending integer coefficients starting at t^0.
    static LaurentPoly from_coeffs(const std::vector<long>& ascending);

    bool is_zero() const noexcept { return coeffs_.empty(); }
    int low() const noexcept { return low_; }
    int high() const noexcept { return low_ + static_cast<int>(coeffs_.size()) - 1; }
    /// Width of the exponent range; 0 for monomials, -1 for zero.
    int span() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    Rational coeff(int exponent) const;
    const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
    const Rational& leading() const { return coeffs_.back(); }
    const Rational& trailing() const { return coeffs_.front(); }
    /// Units of Q[t,t^-1] are the nonzero monomials.
    bool is_unit() const noexcept { return coeffs_.size() == 1; }

    LaurentPoly shifted(int k) const;
    /// t -> t^-1 without normalization.
    LaurentPoly involute() const;
    Rational eval(const Rational& x) const;

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const LaurentPoly& b) { return a *= b; }
    bool operator==(const LaurentPoly& o) const { return low_ == o.low_ && coeffs_ == o.coeffs_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }
    /// Total order used for deterministic sorting: span, then coefficients.
    bool operator<(const LaurentPoly& o) const;

    /// Renders as "2*t^2 - 5*t + 2", exponents descending.
    std::string to_string() const;

   private:
    void trim();

    int low_ = 0;
    std::vector<Rational> coeffs_;
};

LaurentPoly parse_laurent(std::string_view text);

/// Canonical associate: lowest exponent 0, primitive integer coefficients, positive leading term.
LaurentPoly normalize(const LaurentPoly& p);
bool associates(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly conjugate(const LaurentPoly& p);
bool is_self_conjugate(const LaurentPoly& p);

/// Ordinary polynomial division in Q[t]; both arguments must have low() >= 0.
std::pair<LaurentPoly, LaurentPoly> poly_divmod(const LaurentPoly& a, const LaurentPoly& b);
/// Polynomial degree when viewed in Q[t]; requires low() >= 0.
int poly_degree(const LaurentPoly& p);
/// True iff b divides a in Q[t,t^-1].
bool divides(const LaurentPoly& b, const LaurentPoly& a);
/// a/b in Q[t,t^-1]; throws if inexact.
LaurentPoly exact_quotient(const LaurentPoly& a, const LaurentPoly& b);
/// Representative of p modulo d in Q[t] of degree < deg d; d must have d(0) != 0.
LaurentPoly reduce_mod(const LaurentPoly& p, const LaurentPoly& d);
/// Extended gcd in Q[t]: returns (g, s, u) with s*a + u*b = g, g monic.
struct ExtGcd {
    LaurentPoly g, s, u;
};
ExtGcd poly_ext_gcd(const LaurentPoly& a, const LaurentPoly& b);

struct PrimeFactorization {
    Rational unit = 1;
    int t_power = 0;
    std::vector<std::pair<LaurentPoly, int>> factors;

    LaurentPoly expand() const;
};

constexpr int kDefaultFactorDegreeBound = 32;

PrimeFactorization factor(const LaurentPoly& p, int degree_bound = kDefaultFactorDegreeBound);
/// Squarefree decomposition of a canonical polynomial: pairs (squarefree part, multiplicity).
std::vector<std::pair<LaurentPoly, int>> squarefree_decomposition(const LaurentPoly& p);
bool fox_milnor(const LaurentPoly& p);

/// All monic-up-to-units divisors of p (canonical form), deterministic order.
std::vector<LaurentPoly> divisors(const PrimeFactorization& f);

}  // namespace slicekit
