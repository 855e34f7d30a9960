#include <algorithm>

#include "slicekit/errors.hpp"
#include "slicekit/matrix.hpp"

namespace slicekit {

QMatrix to_rational(const IntMatrix& m) {
    QMatrix q(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = Rational(m(i, j));
    return q;
}

QVector to_rational(const IntVector& v) {
    QVector q;
    q.reserve(v.size());
    for (const auto& x : v) q.emplace_back(x);
    return q;
}

bool is_zero_vector(const QVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

std::vector<std::size_t> rref(QMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, r);
        Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(QMatrix m) { return rref(m).size(); }

QMatrix nullspace(const QMatrix& m) {
    QMatrix r = m;
    auto pivots = rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    QMatrix basis(free_cols.size(), m.cols(), Rational(0));
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::size_t f = free_cols[k];
        basis(k, f) = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) basis(k, pivots[i]) = -r(i, f);
    }
    return basis;
}

bool solve(const QMatrix& m, const QVector& b, QVector& x) {
    if (b.size() != m.rows()) throw Error(ErrorKind::InvalidArgument, "solve: shape mismatch");
    QMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return false;
    x.assign(m.cols(), Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
    return true;
}

QMatrix inverse(const QMatrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw Error(ErrorKind::InvalidArgument, "inverse of non-square matrix");
    QMatrix aug(n, 2 * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto pivots = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) throw Error(ErrorKind::InvalidArgument, "singular matrix");
    QMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

Rational determinant(QMatrix m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            m.swap_rows(p, c);
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rational f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

Integer determinant(const IntMatrix& m) {
    // Bareiss fraction-free elimination.
    const std::size_t n = m.rows();
    if (m.cols() != n) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
    if (n == 0) return 1;
    IntMatrix a = m;
    Integer prev = 1;
    int sgn_flip = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            a.swap_rows(p, k);
            sgn_flip = -sgn_flip;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = v;
            }
        prev = a(k, k);
    }
    return sgn_flip * a(n - 1, n - 1);
}

QVector characteristic_polynomial(const QMatrix& m) {
    // Faddeev-LeVerrier: c_n = 1, M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
    const std::size_t n = m.rows();
    QVector c(n + 1, Rational(0));
    c[n] = 1;
    QMatrix mk(n, n, Rational(0));
    for (std::size_t k = 1; k <= n; ++k) {
        QMatrix am = m * mk;
        for (std::size_t i = 0; i < n; ++i) am(i, i) += c[n - k + 1];
        mk = am;
        QMatrix amk = m * mk;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += amk(i, i);
        c[n - k] = -tr / static_cast<long>(k);
    }
    return c;
}

Inertia symmetric_inertia(QMatrix m) {
    Inertia out;
    std::size_t n = m.rows();
    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = i;
    while (!active.empty()) {
        std::size_t piv = active.size();
        for (std::size_t k = 0; k < active.size(); ++k)
            if (m(active[k], active[k]) != 0) {
                piv = k;
                break;
            }
        if (piv == active.size()) {
            // All diagonal entries vanish: fold a nonzero off-diagonal entry onto the diagonal.
            bool found = false;
            for (std::size_t a = 0; a < active.size() && !found; ++a)
                for (std::size_t b = a + 1; b < active.size() && !found; ++b) {
                    std::size_t i = active[a], j = active[b];
                    if (m(i, j) == 0) continue;
                    for (std::size_t c : active) m(i, c) += m(j, c);
                    for (std::size_t c : active) m(c, i) += m(c, j);
                    piv = a;
                    found = true;
                }
            if (!found) {
                out.zero += static_cast<int>(active.size());
                break;
            }
        }
        std::size_t p = active[piv];
        Rational d = m(p, p);
        (d > 0 ? out.positive : out.negative) += 1;
        active.erase(active.begin() + static_cast<long>(piv));
        for (std::size_t i : active) {
            if (m(i, p) == 0) continue;
            Rational f = m(i, p) / d;
            for (std::size_t j : active) m(i, j) -= f * m(p, j);
        }
    }
    return out;
}

int symmetric_signature(QMatrix m) {
    auto in = symmetric_inertia(std::move(m));
    return in.positive - in.negative;
}

std::vector<Integer> smith_invariant_factors(IntMatrix a) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<Integer> diag;
    std::size_t k = 0;
    while (k < rows && k < cols) {
        // Pick the smallest nonzero entry in the trailing block as pivot.
        bool any = false;
        std::size_t pi = k, pj = k;
        Integer best;
        for (std::size_t i = k; i < rows; ++i)
            for (std::size_t j = k; j < cols; ++j)
                if (a(i, j) != 0 && (!any || abs(a(i, j)) < best)) {
                    any = true;
                    best = abs(a(i, j));
                    pi = i;
                    pj = j;
                }
        if (!any) break;
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        bool clean = true;
        for (std::size_t i = k + 1; i < rows; ++i) {
            if (a(i, k) == 0) continue;
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a(i, k).get_mpz_t(), a(k, k).get_mpz_t());
            for (std::size_t j = k; j < cols; ++j) a(i, j) -= q * a(k, j);
            if (a(i, k) != 0) clean = false;
        }
        for (std::size_t j = k + 1; j < cols; ++j) {
            if (a(k, j) == 0) continue;
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a(k, j).get_mpz_t(), a(k, k).get_mpz_t());
            for (std::size_t i = k; i < rows; ++i) a(i, j) -= q * a(i, k);
            if (a(k, j) != 0) clean = false;
        }
        if (!clean) continue;
        bool divides_all = true;
        for (std::size_t i = k + 1; i < rows && divides_all; ++i)
            for (std::size_t j = k + 1; j < cols; ++j)
                if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(k, k).get_mpz_t())) {
                    for (std::size_t c = k; c < cols; ++c) a(k, c) += a(i, c);
                    divides_all = false;
                    break;
                }
        if (!divides_all) continue;
        diag.push_back(abs(a(k, k)));
        ++k;
    }
    return diag;
}

}  // namespace slicekit
