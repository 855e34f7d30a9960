#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "slicekit/laurent.hpp"
#include "slicekit/matrix.hpp"
#include "slicekit/roots.hpp"

namespace slicekit {

/// Block-diagonal [[0,1],[-1,0]] of size 2g: the fixed intersection form.
IntMatrix standard_symplectic(int genus);

/// 2g x 2g integer Seifert matrix with V - V^T = standard_symplectic(g).
class SeifertMatrix {
   public:
    SeifertMatrix() = default;
    /// Validates the symplectic convention; throws InvalidArgument otherwise.
    explicit SeifertMatrix(IntMatrix v);

    int genus() const noexcept { return static_cast<int>(v_.rows() / 2); }
    std::size_t size() const noexcept { return v_.rows(); }
    const IntMatrix& matrix() const noexcept { return v_; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return v_(i, j); }
    bool operator==(const SeifertMatrix& o) const { return v_ == o.v_; }

   private:
    IntMatrix v_;
};

/// Integral change of basis P with P^T (V - V^T) P standard; requires det(V - V^T) = 1.
SeifertMatrix rebase(const IntMatrix& v);
/// Same, also returning the basis change (columns are the new basis in old coordinates).
SeifertMatrix rebase(const IntMatrix& v, IntMatrix& basis);

SeifertMatrix twist_knot(long tw);
SeifertMatrix genus_one(long l, long tw);
SeifertMatrix torus_knot(long p, long q);
SeifertMatrix connected_sum(const SeifertMatrix& a, const SeifertMatrix& b);
SeifertMatrix mirror(const SeifertMatrix& a);

/// Text format: genus on the first line, then 4g^2 row-major integers.
SeifertMatrix parse_matrix_text(const std::string& text);
std::string to_matrix_text(const SeifertMatrix& v);

LaurentPoly alexander_poly(const SeifertMatrix& v);

/// omega = (1 + i s)/(1 - i s) for rational s, or the point -1.
struct UnitCirclePoint {
    bool minus_one = false;
    Rational s;

    static UnitCirclePoint cayley(const Rational& s) { return {false, s}; }
    static UnitCirclePoint at_minus_one() { return {true, 0}; }
    /// x = omega + conj(omega) = 2(1 - s^2)/(1 + s^2).
    Rational x() const;
};

int lt_signature(const SeifertMatrix& v, const UnitCirclePoint& omega);

/// Signature of the Hermitian matrix A + iB (A symmetric, B antisymmetric), exact.
int hermitian_signature(const QMatrix& re, const QMatrix& im);

struct JumpPoint {
    RootInterval x;  // in [-2, 2]
    int multiplicity = 1;
};
using JumpSet = std::vector<JumpPoint>;

/// Rewrites a palindromic Laurent polynomial as P(x) with x = t + t^-1.
LaurentPoly symmetrize(const LaurentPoly& delta);

JumpSet jump_set(const SeifertMatrix& v);

struct CertifiedReal {
    Rational mid, rad;

    Rational lo() const { return mid - rad; }
    Rational hi() const { return mid + rad; }
    bool contains(const Rational& q) const { return lo() <= q && q <= hi(); }
    bool excludes_zero() const { return !contains(0); }
    bool exact() const { return rad == 0; }
    std::string to_string() const;
};

/// One arc of constancy of the signature function on the upper half circle.
struct SignatureArc {
    CertifiedReal theta_lo, theta_hi;  // in units of pi
    int sigma = 0;
    Rational sample_s;  // Cayley parameter where sigma was evaluated
};

struct SignatureFunction {
    JumpSet jumps;
    std::vector<SignatureArc> arcs;  // ordered by increasing theta, covering [0, pi]
};

SignatureFunction signature_function(const SeifertMatrix& v, const Rational& target_radius);
CertifiedReal rho0(const SeifertMatrix& v, const Rational& target_radius);

/// CSV: arcs (theta_lo, theta_hi in radians, sigma), blank line, then jumps (x_lo, x_hi, multiplicity).
std::string signature_csv(const SignatureFunction& f);

}  // namespace slicekit
