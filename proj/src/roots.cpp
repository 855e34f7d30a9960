#include "slicekit/roots.hpp"

#include <algorithm>

#include "slicekit/errors.hpp"

namespace slicekit {

namespace {

LaurentPoly derivative(const LaurentPoly& a) {
    std::vector<Rational> c;
    for (int e = 1; e <= a.high(); ++e) c.emplace_back(a.coeff(e) * e);
    return LaurentPoly(0, std::move(c));
}

}  // namespace

SturmSequence::SturmSequence(const LaurentPoly& p) {
    if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "Sturm sequence of zero");
    chain_.push_back(p);
    LaurentPoly d = derivative(p);
    if (d.is_zero()) return;
    chain_.push_back(d);
    for (;;) {
        LaurentPoly r = poly_divmod(chain_[chain_.size() - 2], chain_.back()).second;
        if (r.is_zero()) break;
        // Positive rescaling keeps signs and tames coefficient growth.
        LaurentPoly n = normalize(r);
        if ((n.leading() > 0) == (r.leading() > 0)) n = -n;
        chain_.push_back(n);
    }
}

int SturmSequence::sign_changes(const Rational& x) const {
    int changes = 0, last = 0;
    for (const auto& p : chain_) {
        int s = sign(p.eval(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

RootInterval refine_root(const SturmSequence& s, RootInterval r, const Rational& max_width) {
    const LaurentPoly& p = s.poly();
    if (r.exact()) return r;
    if (p.eval(r.hi) == 0) return {r.hi, r.hi};
    while (r.width() >= max_width) {
        Rational mid = (r.lo + r.hi) / 2;
        if (p.eval(mid) == 0) return {mid, mid};
        if (s.count(r.lo, mid) == 1)
            r.hi = mid;
        else
            r.lo = mid;
    }
    return r;
}

std::vector<RootInterval> isolate_roots(const LaurentPoly& squarefree, const Rational& lo, const Rational& hi,
                                        const Rational& max_width) {
    std::vector<RootInterval> out;
    if (poly_degree(squarefree) <= 0) return out;
    SturmSequence s(squarefree);
    if (squarefree.eval(lo) == 0) out.push_back({lo, lo});
    std::vector<RootInterval> stack{{lo, hi}};
    while (!stack.empty()) {
        RootInterval iv = stack.back();
        stack.pop_back();
        int n = s.count(iv.lo, iv.hi);
        if (n == 0) continue;
        if (n == 1) {
            out.push_back(refine_root(s, iv, max_width));
            continue;
        }
        Rational mid = (iv.lo + iv.hi) / 2;
        stack.push_back({iv.lo, mid});
        stack.push_back({mid, iv.hi});
    }
    std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
    return out;
}

}  // namespace slicekit
