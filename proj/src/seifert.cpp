#include "slicekit/seifert.hpp"

#include <mpfr.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "slicekit/errors.hpp"

namespace slicekit {

IntMatrix standard_symplectic(int genus) {
    auto n = static_cast<std::size_t>(2 * genus);
    IntMatrix j(n, n, Integer(0));
    for (std::size_t k = 0; k < n; k += 2) {
        j(k, k + 1) = 1;
        j(k + 1, k) = -1;
    }
    return j;
}

SeifertMatrix::SeifertMatrix(IntMatrix v) : v_(std::move(v)) {
    if (v_.rows() != v_.cols() || v_.rows() % 2 != 0)
        throw Error(ErrorKind::InvalidArgument, "Seifert matrix must be square of even size");
    if (v_ - v_.transpose() != standard_symplectic(genus()))
        throw Error(ErrorKind::InvalidArgument, "V - V^T is not the standard symplectic form");
}

namespace {

// Basis B and Gram matrix G = B^T G0 B updated together under column operations.
struct SymplecticReducer {
    IntMatrix b, g;

    void add_col(std::size_t src, std::size_t dst, const Integer& c) {
        if (c == 0) return;
        for (std::size_t i = 0; i < b.rows(); ++i) b(i, dst) += c * b(i, src);
        for (std::size_t i = 0; i < g.rows(); ++i) g(i, dst) += c * g(i, src);
        for (std::size_t j = 0; j < g.cols(); ++j) g(dst, j) += c * g(src, j);
    }
    void swap(std::size_t a, std::size_t c) {
        b.swap_cols(a, c);
        g.swap_cols(a, c);
        g.swap_rows(a, c);
    }
    void negate(std::size_t a) {
        for (std::size_t i = 0; i < b.rows(); ++i) b(i, a) = -b(i, a);
        for (std::size_t i = 0; i < g.rows(); ++i) g(i, a) = -g(i, a);
        for (std::size_t j = 0; j < g.cols(); ++j) g(a, j) = -g(a, j);
    }
};

}  // namespace

SeifertMatrix rebase(const IntMatrix& v, IntMatrix& basis) {
    const std::size_t n = v.rows();
    if (v.cols() != n || n % 2 != 0) throw Error(ErrorKind::InvalidArgument, "Seifert matrix must be square of even size");
    SymplecticReducer r{IntMatrix::identity(n), v - v.transpose()};
    for (std::size_t k = 0; k < n; k += 2) {
        // Euclid along row k until a single entry remains among the later columns.
        for (;;) {
            std::size_t piv = n;
            std::size_t nonzero = 0;
            for (std::size_t j = k + 1; j < n; ++j) {
                if (r.g(k, j) == 0) continue;
                ++nonzero;
                if (piv == n || abs(r.g(k, j)) < abs(r.g(k, piv))) piv = j;
            }
            if (piv == n) throw Error(ErrorKind::InvalidArgument, "V - V^T is not unimodular");
            if (nonzero == 1) {
                r.swap(piv, k + 1);
                break;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (j == piv || r.g(k, j) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), r.g(k, j).get_mpz_t(), r.g(k, piv).get_mpz_t());
                r.add_col(piv, j, -q);
            }
        }
        if (r.g(k, k + 1) == -1) r.negate(k + 1);
        if (r.g(k, k + 1) != 1) throw Error(ErrorKind::InvalidArgument, "V - V^T is not unimodular");
        for (std::size_t j = k + 2; j < n; ++j) {
            Integer c = r.g(k + 1, j);
            r.add_col(k, j, c);
        }
    }
    basis = r.b;
    return SeifertMatrix(r.b.transpose() * v * r.b);
}

SeifertMatrix rebase(const IntMatrix& v) {
    IntMatrix basis;
    return rebase(v, basis);
}

SeifertMatrix twist_knot(long tw) { return SeifertMatrix(IntMatrix{{Integer(tw), Integer(1)}, {Integer(0), Integer(-1)}}); }

SeifertMatrix genus_one(long l, long tw) {
    // [[0, l], [l+1, tw]] in the basis (a, -b), which puts V - V^T in standard form.
    return SeifertMatrix(IntMatrix{{Integer(0), Integer(-l)}, {Integer(-l - 1), Integer(tw)}});
}

SeifertMatrix torus_knot(long p, long q) {
    if (std::gcd(p, q) != 1) throw Error(ErrorKind::NotAKnot, "torus link parameters must be coprime");
    long a = std::labs(p), b = std::labs(q);
    if (a <= 1 || b <= 1) return SeifertMatrix();
    auto gamma = [](long m) {
        auto k = static_cast<std::size_t>(m - 1);
        IntMatrix g(k, k, Integer(0));
        for (std::size_t i = 0; i < k; ++i) {
            g(i, i) = -1;
            if (i + 1 < k) g(i, i + 1) = 1;
        }
        return g;
    };
    IntMatrix ga = gamma(a), gb = gamma(b);
    const std::size_t n = ga.rows() * gb.rows();
    IntMatrix v(n, n, Integer(0));
    for (std::size_t i = 0; i < ga.rows(); ++i)
        for (std::size_t j = 0; j < ga.cols(); ++j)
            for (std::size_t k = 0; k < gb.rows(); ++k)
                for (std::size_t l = 0; l < gb.cols(); ++l)
                    v(i * gb.rows() + k, j * gb.cols() + l) = -ga(i, j) * gb(k, l);
    SeifertMatrix out = rebase(v);
    return (p > 0) == (q > 0) ? out : mirror(out);
}

SeifertMatrix connected_sum(const SeifertMatrix& a, const SeifertMatrix& b) {
    const std::size_t n = a.size() + b.size();
    IntMatrix v(n, n, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) v(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) v(a.size() + i, a.size() + j) = b(i, j);
    return SeifertMatrix(std::move(v));
}

SeifertMatrix mirror(const SeifertMatrix& a) { return SeifertMatrix(-a.matrix().transpose()); }

SeifertMatrix parse_matrix_text(const std::string& text) {
    std::istringstream in(text);
    long g = -1;
    if (!(in >> g) || g < 0) throw Error(ErrorKind::Schema, "matrix text: missing genus line");
    const auto n = static_cast<std::size_t>(2 * g);
    IntMatrix v(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::string tok;
            if (!(in >> tok)) throw Error(ErrorKind::Schema, "matrix text: expected " + std::to_string(n * n) + " entries");
            if (v(i, j).set_str(tok, 10) != 0) throw Error(ErrorKind::Schema, "matrix text: bad integer '" + tok + "'");
        }
    std::string extra;
    if (in >> extra) throw Error(ErrorKind::Schema, "matrix text: trailing data");
    if (v - v.transpose() == standard_symplectic(static_cast<int>(g))) return SeifertMatrix(v);
    return rebase(v);
}

std::string to_matrix_text(const SeifertMatrix& v) {
    std::ostringstream out;
    out << v.genus() << "\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) out << (j ? " " : "") << v(i, j).get_str();
        out << "\n";
    }
    return out.str();
}

LaurentPoly alexander_poly(const SeifertMatrix& v) {
    const std::size_t n = v.size();
    if (n == 0) return LaurentPoly(1);
    // det(tV - V^T) has degree <= n: interpolate from n+1 exact evaluations.
    std::vector<Rational> xs, ys;
    for (std::size_t k = 0; k <= n; ++k) {
        Rational t = static_cast<long>(k);
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = t * Rational(v(i, j)) - Rational(v(j, i));
        xs.push_back(t);
        ys.push_back(determinant(m));
    }
    // Newton divided differences.
    std::vector<Rational> c = ys;
    for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t i = n; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j]);
    LaurentPoly p = c[n];
    for (std::size_t i = n; i-- > 0;) p = p * LaurentPoly(0, {Rational(-xs[i]), Rational(1)}) + LaurentPoly(c[i]);
    return normalize(p);
}

Rational UnitCirclePoint::x() const {
    if (minus_one) return -2;
    return 2 * (1 - s * s) / (1 + s * s);
}

int hermitian_signature(const QMatrix& re, const QMatrix& im) {
    const std::size_t n = re.rows();
    QMatrix big(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            big(i, j) = re(i, j);
            big(n + i, n + j) = re(i, j);
            big(i, n + j) = -im(i, j);
            big(n + i, j) = im(i, j);
        }
    return symmetric_signature(std::move(big)) / 2;
}

int lt_signature(const SeifertMatrix& v, const UnitCirclePoint& omega) {
    const std::size_t n = v.size();
    if (n == 0) return 0;
    QMatrix sym(n, n), anti(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            sym(i, j) = Rational(v(i, j) + v(j, i));
            anti(i, j) = Rational(v(i, j) - v(j, i));
        }
    if (omega.minus_one) return symmetric_signature(std::move(sym));
    if (omega.s == 0) return 0;
    // (1+s^2)/2 * H = s (s (V+V^T) - i (V-V^T)); the positive factor drops out.
    return sign(omega.s) * hermitian_signature(omega.s * sym, -anti);
}

LaurentPoly symmetrize(const LaurentPoly& delta) {
    LaurentPoly d = normalize(delta);
    if (d.span() % 2 != 0) throw Error(ErrorKind::InvalidArgument, "polynomial is not symmetric");
    const int m = d.span() / 2;
    for (int k = 1; k <= m; ++k)
        if (d.coeff(m + k) != d.coeff(m - k)) throw Error(ErrorKind::InvalidArgument, "polynomial is not symmetric");
    // t^k + t^-k as a polynomial in x = t + t^-1.
    LaurentPoly x = LaurentPoly::t();
    LaurentPoly prev = 2, cur = x;
    LaurentPoly out = d.coeff(m);
    for (int k = 1; k <= m; ++k) {
        out += LaurentPoly(d.coeff(m + k)) * cur;
        LaurentPoly next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    return out;
}

namespace {

JumpSet jumps_with_width(const SeifertMatrix& v, const Rational& width) {
    JumpSet out;
    LaurentPoly delta = alexander_poly(v);
    if (delta.is_unit()) return out;
    LaurentPoly p = symmetrize(delta);
    auto pieces = squarefree_decomposition(p);
    LaurentPoly sq = 1;
    for (const auto& [f, m] : pieces) sq *= f;
    for (const auto& iv : isolate_roots(sq, -2, 2, width)) {
        int mult = 0;
        for (const auto& [f, m] : pieces) {
            bool here = iv.exact() ? f.eval(iv.lo) == 0 : SturmSequence(f).count(iv.lo, iv.hi) > 0;
            if (here) mult = m;
        }
        out.push_back({iv, mult});
    }
    return out;
}

// Rational s > 0 with a < x(s) < b, for -2 <= a < b <= 2.
Rational cayley_in_gap(const Rational& a, const Rational& b) {
    auto x = [](const Rational& s) { return UnitCirclePoint::cayley(s).x(); };
    Rational lo = 0, hi = 1;
    while (x(hi) >= b) hi *= 2;
    if (x(hi) > a) return hi;
    for (;;) {
        Rational mid = (lo + hi) / 2;
        Rational xm = x(mid);
        if (a < xm && xm < b) return mid;
        if (xm >= b)
            lo = mid;
        else
            hi = mid;
    }
}

// arccos(y)/pi rounded in direction dir, for y in [-1, 1].
Rational acos_over_pi(const Rational& y, mpfr_rnd_t dir, mpfr_prec_t prec) {
    mpfr_t a, pi;
    mpfr_init2(a, prec);
    mpfr_init2(pi, prec);
    // arccos is decreasing: round its argument against the requested direction.
    mpfr_set_q(a, y.get_mpq_t(), dir == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD);
    if (mpfr_cmp_si(a, 1) > 0) mpfr_set_si(a, 1, MPFR_RNDN);
    if (mpfr_cmp_si(a, -1) < 0) mpfr_set_si(a, -1, MPFR_RNDN);
    mpfr_acos(a, a, dir);
    mpfr_const_pi(pi, dir == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD);
    mpfr_div(a, a, pi, dir);
    Rational out;
    mpfr_get_q(out.get_mpq_t(), a);
    mpfr_clear(a);
    mpfr_clear(pi);
    return out;
}

// theta/pi for a root x = 2 cos(theta) enclosed in iv.
CertifiedReal theta_over_pi(const RootInterval& iv, mpfr_prec_t prec) {
    if (iv.exact()) {
        // By Niven's theorem these are the only rational x with rational theta/pi.
        if (iv.lo == 2) return {0, 0};
        if (iv.lo == 1) return {Rational(1, 3), 0};
        if (iv.lo == 0) return {Rational(1, 2), 0};
        if (iv.lo == -1) return {Rational(2, 3), 0};
        if (iv.lo == -2) return {1, 0};
    }
    Rational lo = acos_over_pi(iv.hi / 2, MPFR_RNDD, prec);
    Rational hi = acos_over_pi(iv.lo / 2, MPFR_RNDU, prec);
    return {(lo + hi) / 2, (hi - lo) / 2};
}

SignatureFunction build_function(const SeifertMatrix& v, const Rational& width, mpfr_prec_t prec) {
    SignatureFunction f;
    f.jumps = jumps_with_width(v, width);
    std::vector<const JumpPoint*> interior;
    for (const auto& j : f.jumps)
        if (!(j.x.exact() && (j.x.lo == -2 || j.x.lo == 2))) interior.push_back(&j);
    std::sort(interior.begin(), interior.end(), [](const JumpPoint* a, const JumpPoint* b) { return a->x.lo > b->x.lo; });
    const std::size_t m = interior.size();
    for (std::size_t k = 0; k <= m; ++k) {
        Rational upper = k == 0 ? Rational(2) : interior[k - 1]->x.lo;
        Rational lower = k == m ? Rational(-2) : interior[k]->x.hi;
        SignatureArc arc;
        arc.sample_s = cayley_in_gap(lower, upper);
        arc.sigma = lt_signature(v, UnitCirclePoint::cayley(arc.sample_s));
        arc.theta_lo = k == 0 ? CertifiedReal{0, 0} : theta_over_pi(interior[k - 1]->x, prec);
        arc.theta_hi = k == m ? CertifiedReal{1, 0} : theta_over_pi(interior[k]->x, prec);
        f.arcs.push_back(arc);
    }
    return f;
}

CertifiedReal integrate(const SignatureFunction& f) {
    // (1/pi) * integral over [0, pi] = sigma_last + sum_j (sigma_{j-1} - sigma_j) theta_j / pi.
    CertifiedReal out{f.arcs.back().sigma, 0};
    for (std::size_t j = 1; j < f.arcs.size(); ++j) {
        int c = f.arcs[j - 1].sigma - f.arcs[j].sigma;
        const CertifiedReal& th = f.arcs[j].theta_lo;
        out.mid += c * th.mid;
        out.rad += std::abs(c) * th.rad;
    }
    return out;
}

const Rational kInitialWidth(1, Integer(1) << 32);

}  // namespace

JumpSet jump_set(const SeifertMatrix& v) { return jumps_with_width(v, kInitialWidth); }

SignatureFunction signature_function(const SeifertMatrix& v, const Rational& target_radius) {
    if (target_radius <= 0) throw Error(ErrorKind::InvalidArgument, "target radius must be positive");
    Rational width = kInitialWidth;
    mpfr_prec_t prec = 128;
    for (;;) {
        SignatureFunction f = build_function(v, width, prec);
        bool ok = std::all_of(f.arcs.begin(), f.arcs.end(), [&](const SignatureArc& a) {
            return a.theta_lo.rad <= target_radius && a.theta_hi.rad <= target_radius;
        });
        if (ok) return f;
        width /= 65536;
        prec += 64;
    }
}

CertifiedReal rho0(const SeifertMatrix& v, const Rational& target_radius) {
    if (target_radius <= 0) throw Error(ErrorKind::InvalidArgument, "target radius must be positive");
    Rational width = kInitialWidth;
    mpfr_prec_t prec = 128;
    for (;;) {
        CertifiedReal r = integrate(build_function(v, width, prec));
        if (r.rad <= target_radius) return r;
        width /= 65536;
        prec += 64;
    }
}

std::string CertifiedReal::to_string() const {
    if (exact()) return slicekit::to_string(mid);
    return to_decimal(mid) + " +/- " + to_decimal(rad, 3);
}

namespace {

std::string times_pi(const Rational& q) {
    mpfr_t a;
    mpfr_init2(a, 128);
    mpfr_const_pi(a, MPFR_RNDN);
    mpfr_mul_q(a, a, q.get_mpq_t(), MPFR_RNDN);
    char buf[64];
    mpfr_snprintf(buf, sizeof buf, "%.17Rg", a);
    mpfr_clear(a);
    return buf;
}

}  // namespace

std::string signature_csv(const SignatureFunction& f) {
    std::ostringstream out;
    out << "theta_lo,theta_hi,sigma\n";
    for (const auto& a : f.arcs) out << times_pi(a.theta_lo.mid) << "," << times_pi(a.theta_hi.mid) << "," << a.sigma << "\n";
    out << "\nx_lo,x_hi,multiplicity\n";
    for (const auto& j : f.jumps)
        out << to_decimal(j.x.lo) << "," << to_decimal(j.x.hi) << "," << j.multiplicity << "\n";
    return out.str();
}

}  // namespace slicekit
