#pragma once

#include <string>
#include <vector>

#include "slicekit/laurent.hpp"
#include "slicekit/matrix.hpp"
#include "slicekit/seifert.hpp"

namespace slicekit {

/// Element of Q(t)/Q[t,t^-1] in lowest terms: num/den, canonical den, deg num < deg den.
class BlanchfieldValue {
   public:
    BlanchfieldValue() = default;
    BlanchfieldValue(const LaurentPoly& num, const LaurentPoly& den);

    bool is_zero() const { return num_.is_zero(); }
    const LaurentPoly& numerator() const { return num_; }
    const LaurentPoly& denominator() const { return den_; }
    BlanchfieldValue conjugate() const;
    BlanchfieldValue times(const LaurentPoly& p) const;
    bool operator==(const BlanchfieldValue& o) const { return num_ == o.num_ && den_ == o.den_; }
    std::string to_string() const;

   private:
    LaurentPoly num_, den_ = LaurentPoly(1);
};

/// T-invariant subspace of the module, basis rows kept in reduced row echelon form.
struct Submodule {
    QMatrix basis;  // k x n
    LaurentPoly order = LaurentPoly(1);

    int dimension() const { return static_cast<int>(basis.rows()); }
    bool contains(const QVector& x) const;
    bool operator==(const Submodule& o) const { return basis == o.basis; }
    std::string to_string() const;
};

/// Deterministic ordering: dimension, order ideal, then basis entries.
bool submodule_less(const Submodule& a, const Submodule& b);

/// Larger presentations are refused: the polynomial Smith form grows too fast.
inline constexpr std::size_t kMaxPresentationSize = 20;

/// Rational Alexander module presented by tV - V^T, as Q^n with the action of t.
class AlexanderModule {
   public:
    static AlexanderModule present(const SeifertMatrix& v);

    int dimension() const { return static_cast<int>(t_.rows()); }
    const QMatrix& t_matrix() const { return t_; }
    const LaurentPoly& delta() const { return delta_; }
    const SeifertMatrix& seifert() const { return v_; }
    /// Nonunit invariant factors, canonical.
    std::vector<LaurentPoly> invariant_factors() const;
    bool is_cyclic() const { return blocks_.size() <= 1; }

    /// Class of a polynomial vector in the presentation generators.
    QVector class_of(const std::vector<LaurentPoly>& x) const;
    /// Class of the surface class v in H_1(Sigma), sent to (V - V^T) v.
    QVector surface_class(const IntVector& v) const;
    /// Class of the generator combination sum c_i e_i (dual-curve coordinates).
    QVector generator_class(const IntVector& c) const;
    QVector apply(const LaurentPoly& p, const QVector& x) const;
    QMatrix poly_of_t(const LaurentPoly& p) const;

    BlanchfieldValue blanchfield(const QVector& x, const QVector& y) const;
    /// Coefficient vector (length n) of the numerator of Bl(x, y) over delta.
    QVector blanchfield_numerator(const QVector& x, const QVector& y) const;

    Submodule span(const QMatrix& generators) const;
    Submodule zero() const;
    Submodule whole() const;

   private:
    struct Block {
        std::size_t index;  // position in the Smith form
        LaurentPoly d;      // exact invariant factor
        LaurentPoly canon;  // canonical associate
        std::size_t offset;
        int degree;
    };

    SeifertMatrix v_;
    LaurentPoly delta_ = LaurentPoly(1);
    std::vector<Block> blocks_;
    std::vector<std::vector<LaurentPoly>> u_, uinv_, w_;
    QMatrix t_;
    // pairing_[a][b] = numerator coefficients of Bl(e_a, e_b) over delta
    std::vector<std::vector<QVector>> pairing_;
};

Submodule orthogonal_complement(const AlexanderModule& a, const Submodule& p);
bool is_isotropic(const AlexanderModule& a, const Submodule& p);
bool is_lagrangian(const AlexanderModule& a, const Submodule& p);
bool is_proper(const AlexanderModule& a, const Submodule& p);

/// Every submodule of a cyclic module (one per divisor of delta), including 0 and A.
std::vector<Submodule> submodules_cyclic(const AlexanderModule& a);
/// Submodules for supported shapes; throws UnsupportedModule otherwise.
std::vector<Submodule> all_submodules(const AlexanderModule& a);
std::vector<Submodule> isotropic_submodules(const AlexanderModule& a);
std::vector<Submodule> lagrangians(const AlexanderModule& a);

}  // namespace slicekit
