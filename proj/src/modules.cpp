#include "slicekit/modules.hpp"

#include <algorithm>
#include <sstream>

#include "slicekit/errors.hpp"

namespace slicekit {

// ---- BlanchfieldValue ----

BlanchfieldValue::BlanchfieldValue(const LaurentPoly& num, const LaurentPoly& den) {
    if (den.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "Blanchfield value with zero denominator");
    LaurentPoly d = normalize(den);
    if (d.is_unit() || num.is_zero()) return;
    // den = c t^k d
    Rational c = den.leading() / d.leading();
    LaurentPoly n = reduce_mod(num.shifted(-den.low()) * LaurentPoly(Rational(1 / c)), d);
    if (n.is_zero()) return;
    LaurentPoly g = gcd(n, d);
    if (!g.is_unit()) {
        *this = BlanchfieldValue(exact_quotient(n, g), exact_quotient(d, g));
        return;
    }
    num_ = n;
    den_ = d;
}

BlanchfieldValue BlanchfieldValue::conjugate() const {
    if (is_zero()) return {};
    return BlanchfieldValue(num_.involute(), den_.involute());
}

BlanchfieldValue BlanchfieldValue::times(const LaurentPoly& p) const {
    if (is_zero()) return {};
    return BlanchfieldValue(num_ * p, den_);
}

std::string BlanchfieldValue::to_string() const {
    if (is_zero()) return "0";
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

// ---- Submodule ----

bool Submodule::contains(const QVector& x) const {
    if (is_zero_vector(x)) return true;
    QMatrix m(basis.rows() + 1, x.size());
    for (std::size_t i = 0; i < basis.rows(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) m(i, j) = basis(i, j);
    for (std::size_t j = 0; j < x.size(); ++j) m(basis.rows(), j) = x[j];
    return rank(m) == basis.rows();
}

std::string Submodule::to_string() const {
    std::ostringstream out;
    out << "order " << order.to_string() << ", basis [";
    for (std::size_t i = 0; i < basis.rows(); ++i) {
        out << (i ? ", " : "") << "(";
        for (std::size_t j = 0; j < basis.cols(); ++j) out << (j ? ", " : "") << slicekit::to_string(basis(i, j));
        out << ")";
    }
    out << "]";
    return out.str();
}

bool submodule_less(const Submodule& a, const Submodule& b) {
    if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
    std::string oa = a.order.to_string(), ob = b.order.to_string();
    if (oa != ob) return oa < ob;
    for (std::size_t i = 0; i < a.basis.rows(); ++i)
        for (std::size_t j = 0; j < a.basis.cols(); ++j)
            if (a.basis(i, j) != b.basis(i, j)) return a.basis(i, j) < b.basis(i, j);
    return false;
}

// ---- presentation ----

namespace {

using PolyMatrix = std::vector<std::vector<LaurentPoly>>;

PolyMatrix poly_identity(std::size_t n) {
    PolyMatrix m(n, std::vector<LaurentPoly>(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

// Smith normal form over Q[t]: u * m * w = diag, with u^-1 tracked alongside.
struct SmithForm {
    PolyMatrix m, u, uinv, w;

    void row_add(std::size_t src, std::size_t dst, const LaurentPoly& q) {  // row dst += q row src
        for (auto& row : {&m, &u}) {
            auto& a = *row;
            for (std::size_t j = 0; j < a[dst].size(); ++j)
                if (!a[src][j].is_zero()) a[dst][j] += q * a[src][j];
        }
        for (auto& r : uinv)
            if (!r[dst].is_zero()) r[src] -= r[dst] * q;
    }
    void col_add(std::size_t src, std::size_t dst, const LaurentPoly& q) {  // col dst += q col src
        for (auto& row : m)
            if (!row[src].is_zero()) row[dst] += q * row[src];
        for (auto& row : w)
            if (!row[src].is_zero()) row[dst] += q * row[src];
    }
    void row_swap(std::size_t a, std::size_t b) {
        std::swap(m[a], m[b]);
        std::swap(u[a], u[b]);
        for (auto& r : uinv) std::swap(r[a], r[b]);
    }
    void col_swap(std::size_t a, std::size_t b) {
        for (auto& r : m) std::swap(r[a], r[b]);
        for (auto& r : w) std::swap(r[a], r[b]);
    }

    void run() {
        const std::size_t n = m.size();
        for (std::size_t k = 0; k < n; ++k) {
            for (;;) {
                // smallest-degree pivot in the trailing block
                std::size_t pi = n, pj = n;
                for (std::size_t i = k; i < n; ++i)
                    for (std::size_t j = k; j < n; ++j)
                        if (!m[i][j].is_zero() && (pi == n || poly_degree(m[i][j]) < poly_degree(m[pi][pj]))) {
                            pi = i;
                            pj = j;
                        }
                if (pi == n) return;
                row_swap(k, pi);
                col_swap(k, pj);
                bool dirty = false;
                for (std::size_t i = k + 1; i < n; ++i) {
                    if (m[i][k].is_zero()) continue;
                    auto q = poly_divmod(m[i][k], m[k][k]).first;
                    row_add(k, i, -q);
                    if (!m[i][k].is_zero()) dirty = true;
                }
                for (std::size_t j = k + 1; j < n; ++j) {
                    if (m[k][j].is_zero()) continue;
                    auto q = poly_divmod(m[k][j], m[k][k]).first;
                    col_add(k, j, -q);
                    if (!m[k][j].is_zero()) dirty = true;
                }
                if (dirty) continue;
                bool divisible = true;
                for (std::size_t i = k + 1; i < n && divisible; ++i)
                    for (std::size_t j = k + 1; j < n; ++j)
                        if (!poly_divmod(m[i][j], m[k][k]).second.is_zero()) {
                            row_add(i, k, 1);
                            divisible = false;
                            break;
                        }
                if (divisible) break;
            }
        }
    }
};

QMatrix companion(const LaurentPoly& p) {
    // p canonical with p(0) != 0; t * t^i = t^{i+1}, t * t^{k-1} = -(sum c_i t^i)/c_k
    const int k = poly_degree(p);
    QMatrix c(static_cast<std::size_t>(k), static_cast<std::size_t>(k), Rational(0));
    for (int i = 0; i + 1 < k; ++i) c(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(i)) = 1;
    for (int i = 0; i < k; ++i) c(static_cast<std::size_t>(i), static_cast<std::size_t>(k - 1)) = -p.coeff(i) / p.coeff(k);
    return c;
}

QVector coefficients(const LaurentPoly& p, int n) {
    QVector out(static_cast<std::size_t>(n), Rational(0));
    for (int e = std::max(0, p.low()); e <= p.high() && e < n; ++e) out[static_cast<std::size_t>(e)] = p.coeff(e);
    return out;
}

}  // namespace

AlexanderModule AlexanderModule::present(const SeifertMatrix& v) {
    AlexanderModule a;
    a.v_ = v;
    a.delta_ = alexander_poly(v);
    const std::size_t n = v.size();
    a.t_ = QMatrix(0, 0);
    if (n == 0 || a.delta_.is_unit()) return a;
    if (n > kMaxPresentationSize)
        throw Error(ErrorKind::UnsupportedModule, "Seifert matrix of size " + std::to_string(n) +
                                                      " exceeds the supported presentation size " +
                                                      std::to_string(kMaxPresentationSize));

    SmithForm s;
    s.m.assign(n, std::vector<LaurentPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s.m[i][j] = LaurentPoly(0, {Rational(-v(j, i)), Rational(v(i, j))});
    s.u = poly_identity(n);
    s.uinv = poly_identity(n);
    s.w = poly_identity(n);
    s.run();

    std::size_t offset = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const LaurentPoly& d = s.m[j][j];
        if (d.is_zero()) throw Error(ErrorKind::InvalidArgument, "degenerate presentation");
        LaurentPoly canon = normalize(d);
        if (canon.is_unit()) continue;
        int deg = poly_degree(canon);
        a.blocks_.push_back({j, d, canon, offset, deg});
        offset += static_cast<std::size_t>(deg);
    }
    a.u_ = s.u;
    a.uinv_ = s.uinv;
    a.w_ = s.w;

    const std::size_t dim = offset;
    a.t_ = QMatrix(dim, dim, Rational(0));
    for (const auto& b : a.blocks_) {
        QMatrix c = companion(b.canon);
        for (std::size_t i = 0; i < c.rows(); ++i)
            for (std::size_t j = 0; j < c.cols(); ++j) a.t_(b.offset + i, b.offset + j) = c(i, j);
    }

    // Bl(e_a, e_b) = (t - 1) t^{-i_a} Q[j_a][j_b] t^{i_b} / d_{j_b}, Q = conj(U^-1)^T W.
    const LaurentPoly delta = a.delta_;
    const int dd = poly_degree(delta);
    a.pairing_.assign(dim, std::vector<QVector>(dim));
    for (const auto& ba : a.blocks_)
        for (const auto& bb : a.blocks_) {
            LaurentPoly q;
            for (std::size_t l = 0; l < n; ++l) q += a.uinv_[l][ba.index].involute() * a.w_[l][bb.index];
            Rational c = bb.d.leading() / bb.canon.leading();
            LaurentPoly cofactor = exact_quotient(delta, bb.canon);
            LaurentPoly base = (LaurentPoly::t() - LaurentPoly(1)) * q * cofactor *
                               LaurentPoly::monomial(Rational(1 / c), -bb.d.low());
            for (int ia = 0; ia < ba.degree; ++ia)
                for (int ib = 0; ib < bb.degree; ++ib) {
                    LaurentPoly r = reduce_mod(base.shifted(ib - ia), delta);
                    a.pairing_[ba.offset + static_cast<std::size_t>(ia)][bb.offset + static_cast<std::size_t>(ib)] =
                        coefficients(r, dd);
                }
        }
    return a;
}

std::vector<LaurentPoly> AlexanderModule::invariant_factors() const {
    std::vector<LaurentPoly> out;
    for (const auto& b : blocks_) out.push_back(b.canon);
    return out;
}

QVector AlexanderModule::class_of(const std::vector<LaurentPoly>& x) const {
    const std::size_t n = v_.size();
    if (x.size() != n) throw Error(ErrorKind::InvalidArgument, "vector length does not match presentation");
    QVector out(static_cast<std::size_t>(dimension()), Rational(0));
    for (const auto& b : blocks_) {
        LaurentPoly y;
        for (std::size_t l = 0; l < n; ++l)
            if (!x[l].is_zero()) y += u_[b.index][l] * x[l];
        LaurentPoly r = reduce_mod(y, b.canon);
        for (int i = 0; i < b.degree; ++i) out[b.offset + static_cast<std::size_t>(i)] = r.coeff(i);
    }
    return out;
}

QVector AlexanderModule::surface_class(const IntVector& v) const {
    const std::size_t n = v_.size();
    if (v.size() != n) throw Error(ErrorKind::InvalidArgument, "surface class has wrong length");
    std::vector<LaurentPoly> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        Integer acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc += (v_(i, j) - v_(j, i)) * v[j];
        x[i] = Rational(acc);
    }
    return class_of(x);
}

QVector AlexanderModule::generator_class(const IntVector& c) const {
    std::vector<LaurentPoly> x;
    for (const auto& z : c) x.emplace_back(Rational(z));
    return class_of(x);
}

QMatrix AlexanderModule::poly_of_t(const LaurentPoly& p) const {
    const auto n = static_cast<std::size_t>(dimension());
    QMatrix acc(n, n, Rational(0));
    if (p.is_zero() || n == 0) return acc;
    QMatrix step = p.low() >= 0 ? t_ : inverse(t_);
    QMatrix pw = QMatrix::identity(n);
    for (int k = 0; k < std::abs(p.low()); ++k) pw = pw * step;
    for (int e = p.low(); e <= p.high(); ++e) {
        if (e != p.low()) pw = pw * t_;
        Rational c = p.coeff(e);
        if (c != 0) acc = acc + c * pw;
    }
    return acc;
}

QVector AlexanderModule::apply(const LaurentPoly& p, const QVector& x) const { return poly_of_t(p).apply(x); }

QVector AlexanderModule::blanchfield_numerator(const QVector& x, const QVector& y) const {
    const auto n = static_cast<std::size_t>(dimension());
    QVector out(n, Rational(0));
    for (std::size_t a = 0; a < n; ++a) {
        if (x[a] == 0) continue;
        for (std::size_t b = 0; b < n; ++b) {
            if (y[b] == 0) continue;
            Rational c = x[a] * y[b];
            const QVector& r = pairing_[a][b];
            for (std::size_t m = 0; m < n; ++m)
                if (r[m] != 0) out[m] += c * r[m];
        }
    }
    return out;
}

BlanchfieldValue AlexanderModule::blanchfield(const QVector& x, const QVector& y) const {
    if (dimension() == 0) return {};
    QVector num = blanchfield_numerator(x, y);
    return BlanchfieldValue(LaurentPoly(0, num), delta_);
}

namespace {

QMatrix rows_to_rref(QMatrix m) {
    auto piv = rref(m);
    QMatrix out(piv.size(), m.cols());
    for (std::size_t i = 0; i < piv.size(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace

Submodule AlexanderModule::span(const QMatrix& generators) const {
    const auto n = static_cast<std::size_t>(dimension());
    QMatrix cur = rows_to_rref(generators.rows() ? generators : QMatrix(0, n));
    for (;;) {
        QMatrix ext(2 * cur.rows(), n);
        for (std::size_t i = 0; i < cur.rows(); ++i) {
            QVector r = cur.row(i);
            QVector tr = t_.apply(r);
            for (std::size_t j = 0; j < n; ++j) {
                ext(i, j) = r[j];
                ext(cur.rows() + i, j) = tr[j];
            }
        }
        QMatrix next = rows_to_rref(ext);
        if (next.rows() == cur.rows()) break;
        cur = next;
    }
    Submodule s;
    s.basis = cur;
    if (cur.rows() == 0) return s;
    // t restricted to the span, in the basis of rows (pivot coordinates read off the RREF).
    QMatrix probe = cur;
    auto piv = rref(probe);
    const std::size_t k = cur.rows();
    QMatrix c(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        QVector tr = t_.apply(cur.row(i));
        for (std::size_t j = 0; j < k; ++j) c(j, i) = tr[piv[j]];
    }
    QVector cp = characteristic_polynomial(c);
    s.order = normalize(LaurentPoly(0, cp));
    return s;
}

Submodule AlexanderModule::zero() const { return span(QMatrix(0, static_cast<std::size_t>(dimension()))); }

Submodule AlexanderModule::whole() const { return span(QMatrix::identity(static_cast<std::size_t>(dimension()))); }

Submodule orthogonal_complement(const AlexanderModule& a, const Submodule& p) {
    const auto n = static_cast<std::size_t>(a.dimension());
    if (p.dimension() == 0) return a.whole();
    // Bl(x, p_k) = 0: numerator coefficients are linear in x.
    QMatrix cond(static_cast<std::size_t>(p.dimension()) * n, n, Rational(0));
    for (std::size_t k = 0; k < p.basis.rows(); ++k) {
        QVector pk = p.basis.row(k);
        for (std::size_t a_idx = 0; a_idx < n; ++a_idx) {
            QVector e(n, Rational(0));
            e[a_idx] = 1;
            QVector num = a.blanchfield_numerator(e, pk);
            for (std::size_t m = 0; m < n; ++m) cond(k * n + m, a_idx) = num[m];
        }
    }
    return a.span(nullspace(cond));
}

bool is_isotropic(const AlexanderModule& a, const Submodule& p) {
    for (std::size_t i = 0; i < p.basis.rows(); ++i)
        for (std::size_t j = 0; j < p.basis.rows(); ++j)
            if (!is_zero_vector(a.blanchfield_numerator(p.basis.row(i), p.basis.row(j)))) return false;
    return true;
}

bool is_lagrangian(const AlexanderModule& a, const Submodule& p) {
    return 2 * p.dimension() == a.dimension() && is_isotropic(a, p);
}

bool is_proper(const AlexanderModule& a, const Submodule& p) { return p.dimension() < a.dimension(); }

std::vector<Submodule> submodules_cyclic(const AlexanderModule& a) {
    if (!a.is_cyclic()) throw Error(ErrorKind::NotCyclic, "Alexander module is not cyclic");
    std::vector<Submodule> out;
    if (a.dimension() == 0) {
        out.push_back(a.zero());
        return out;
    }
    for (const auto& e : divisors(factor(a.delta()))) {
        QMatrix ker = nullspace(a.poly_of_t(e));
        out.push_back(a.span(ker));
    }
    std::sort(out.begin(), out.end(), submodule_less);
    return out;
}

std::vector<Submodule> all_submodules(const AlexanderModule& a) {
    if (!a.is_cyclic())
        throw Error(ErrorKind::UnsupportedModule,
                    "module is not a sum of cyclic pieces with coprime orders (invariant factors: " +
                        std::to_string(a.invariant_factors().size()) + ")");
    return submodules_cyclic(a);
}

std::vector<Submodule> isotropic_submodules(const AlexanderModule& a) {
    std::vector<Submodule> out;
    for (auto& p : all_submodules(a))
        if (is_isotropic(a, p)) out.push_back(std::move(p));
    return out;
}

std::vector<Submodule> lagrangians(const AlexanderModule& a) {
    std::vector<Submodule> out;
    for (auto& p : all_submodules(a))
        if (is_lagrangian(a, p)) out.push_back(std::move(p));
    return out;
}

}  // namespace slicekit
