#pragma once

#include <vector>

#include "slicekit/laurent.hpp"

namespace slicekit {

/// Sturm chain of a squarefree polynomial in Q[x].
class SturmSequence {
   public:
    explicit SturmSequence(const LaurentPoly& p);

    int sign_changes(const Rational& x) const;
    /// Number of distinct real roots in the half-open interval (a, b].
    int count(const Rational& a, const Rational& b) const { return sign_changes(a) - sign_changes(b); }
    const LaurentPoly& poly() const { return chain_.front(); }

   private:
    std::vector<LaurentPoly> chain_;
};

/// Closed isolating interval; lo == hi marks an exactly known rational root.
struct RootInterval {
    Rational lo, hi;
    bool exact() const { return lo == hi; }
    Rational width() const { return hi - lo; }
};

/// Isolates every root of a squarefree polynomial in [lo, hi], each interval narrower than max_width.
std::vector<RootInterval> isolate_roots(const LaurentPoly& squarefree, const Rational& lo, const Rational& hi,
                                        const Rational& max_width);

/// Shrinks an isolating interval (one root in (lo, hi], or exact) below max_width.
RootInterval refine_root(const SturmSequence& s, RootInterval r, const Rational& max_width);

}  // namespace slicekit
