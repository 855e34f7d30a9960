#include "slicekit/metabolizers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "slicekit/errors.hpp"

namespace slicekit {

std::string Metabolizer::to_string() const {
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < basis.size(); ++i) {
        out << (i ? ", " : "") << "(";
        for (std::size_t j = 0; j < basis[i].size(); ++j) out << (j ? ", " : "") << basis[i][j].get_str();
        out << ")";
    }
    out << "}";
    return out.str();
}

IntVector primitive_form(IntVector v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    if (g == 0) return v;
    auto first = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
    if (*first < 0) g = -g;
    for (auto& x : v) x /= g;
    return v;
}

bool is_summand(const std::vector<IntVector>& vectors, std::size_t ambient) {
    if (vectors.empty()) return true;
    IntMatrix m(vectors.size(), ambient, Integer(0));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != ambient) return false;
        for (std::size_t j = 0; j < ambient; ++j) m(i, j) = vectors[i][j];
    }
    auto d = smith_invariant_factors(m);
    return d.size() == vectors.size() && std::all_of(d.begin(), d.end(), [](const Integer& x) { return abs(x) == 1; });
}

namespace {

Integer form(const IntMatrix& v, const IntVector& x, const IntVector& y) {
    Integer acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) acc += x[i] * v(i, j) * y[j];
    }
    return acc;
}

bool perfect_square(const Integer& d, Integer& root) {
    if (d < 0) return false;
    mpz_sqrt(root.get_mpz_t(), d.get_mpz_t());
    return root * root == d;
}

// Row Hermite normal form of the lattice spanned by the basis.
Metabolizer canonical(std::vector<IntVector> basis) {
    if (basis.empty()) return Metabolizer{};
    const std::size_t n = basis.front().size();
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < basis.size(); ++c) {
        for (;;) {
            std::size_t best = basis.size();
            for (std::size_t r = row; r < basis.size(); ++r)
                if (basis[r][c] != 0 && (best == basis.size() || abs(basis[r][c]) < abs(basis[best][c]))) best = r;
            if (best == basis.size()) break;
            std::swap(basis[row], basis[best]);
            bool done = true;
            for (std::size_t r = row + 1; r < basis.size(); ++r) {
                if (basis[r][c] == 0) continue;
                Integer q = basis[r][c] / basis[row][c];
                for (std::size_t k = 0; k < n; ++k) basis[r][k] -= q * basis[row][k];
                if (basis[r][c] != 0) done = false;
            }
            if (done) break;
        }
        if (basis[row][c] == 0) continue;
        if (basis[row][c] < 0)
            for (auto& z : basis[row]) z = -z;
        for (std::size_t r = 0; r < row; ++r) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), basis[r][c].get_mpz_t(), basis[row][c].get_mpz_t());
            for (std::size_t k = 0; k < n; ++k) basis[r][k] -= q * basis[row][k];
        }
        ++row;
    }
    basis.resize(row);
    return Metabolizer{basis};
}

QMatrix span_rref(const std::vector<IntVector>& basis, std::size_t n) {
    QMatrix m(basis.size(), n, Rational(0));
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = basis[i][j];
    rref(m);
    return m;
}

IntMatrix block(const IntMatrix& v, std::size_t i, std::size_t j) {
    IntMatrix b(2, 2);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t c = 0; c < 2; ++c) b(a, c) = v(2 * i + a, 2 * j + c);
    return b;
}

}  // namespace

bool is_metabolizer(const SeifertMatrix& v, const Metabolizer& m) {
    const std::size_t n = v.size();
    if (m.rank() != v.genus()) return false;
    for (const auto& b : m.basis)
        if (b.size() != n) return false;
    for (const auto& x : m.basis)
        for (const auto& y : m.basis)
            if (form(v.matrix(), x, y) != 0) return false;
    return is_summand(m.basis, n);
}

std::vector<Metabolizer> genus1_metabolizers(const SeifertMatrix& v) {
    if (v.genus() != 1) throw Error(ErrorKind::WrongGenus, "genus1_metabolizers needs genus 1, got " + std::to_string(v.genus()));
    // x^T V x = a u^2 + b u v + c v^2
    const Integer a = v(0, 0), b = v(0, 1) + v(1, 0), c = v(1, 1);
    std::vector<IntVector> lines;
    if (a == 0 && c == 0) {
        lines = {{1, 0}, {0, 1}};
    } else if (a == 0) {
        lines = {{1, 0}, {-c, b}};
    } else if (c == 0) {
        lines = {{0, 1}, {b, -a}};
    } else {
        Integer s;
        if (perfect_square(b * b - 4 * a * c, s)) lines = {{-b + s, 2 * a}, {-b - s, 2 * a}};
    }
    std::set<IntVector> seen;
    std::vector<Metabolizer> out;
    for (auto& x : lines) {
        x = primitive_form(x);
        if (!seen.insert(x).second) continue;
        Metabolizer m{{x}};
        if (is_metabolizer(v, m)) out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

MetabolizerSearch higher_genus_metabolizers(const SeifertMatrix& v, int search_bound) {
    const int g = v.genus();
    const std::size_t n = v.size();
    MetabolizerSearch res;
    if (g == 0) {
        res.metabolizers.push_back(Metabolizer{});
        res.method = "genus zero";
        return res;
    }
    if (g == 1) {
        res.metabolizers = genus1_metabolizers(v);
        res.method = "binary quadratic";
        return res;
    }

    // (a) genus-one blocks with nonunit, pairwise coprime Alexander polynomials.
    bool block_diagonal = true;
    for (std::size_t i = 0; i < static_cast<std::size_t>(g) && block_diagonal; ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(g) && block_diagonal; ++j)
            if (i != j && block(v.matrix(), i, j) != IntMatrix(2, 2, Integer(0))) block_diagonal = false;
    if (block_diagonal) {
        std::vector<SeifertMatrix> blocks;
        std::vector<LaurentPoly> deltas;
        bool coprime = true;
        for (std::size_t i = 0; i < static_cast<std::size_t>(g); ++i) {
            blocks.emplace_back(block(v.matrix(), i, i));
            deltas.push_back(alexander_poly(blocks.back()));
            if (deltas.back().is_unit()) coprime = false;
        }
        for (std::size_t i = 0; i < deltas.size() && coprime; ++i)
            for (std::size_t j = i + 1; j < deltas.size() && coprime; ++j)
                if (!gcd(deltas[i], deltas[j]).is_unit()) coprime = false;
        if (coprime) {
            std::vector<std::vector<Metabolizer>> per;
            for (const auto& b : blocks) per.push_back(genus1_metabolizers(b));
            std::vector<IntVector> cur;
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == per.size()) {
                    res.metabolizers.push_back(canonical(cur));
                    return;
                }
                for (const auto& m : per[i]) {
                    IntVector x(n, Integer(0));
                    x[2 * i] = m.basis[0][0];
                    x[2 * i + 1] = m.basis[0][1];
                    cur.push_back(x);
                    rec(i + 1);
                    cur.pop_back();
                }
            };
            rec(0);
            std::sort(res.metabolizers.begin(), res.metabolizers.end());
            res.method = "coprime genus-one blocks";
            return res;
        }
    }

    // (b) definite symmetrization has no isotropic vectors at all; nonzero signature
    // or a failed Fox-Milnor test rules out a half-rank isotropic summand.
    Inertia in = symmetric_inertia(to_rational(v.matrix() + v.matrix().transpose()));
    if (in.positive == static_cast<int>(n) || in.negative == static_cast<int>(n)) {
        res.method = "definite symmetrization";
        return res;
    }
    if (in.positive != in.negative) {
        res.method = "nonzero signature";
        return res;
    }
    bool fm = true;
    try {
        fm = fox_milnor(alexander_poly(v));
    } catch (const Error&) {
        // factorization out of range; the search below decides
    }
    if (!fm) {
        res.method = "Fox-Milnor obstruction";
        return res;
    }

    // (c) bounded enumeration of isotropic frames.
    res.complete = false;
    double cells = std::pow(2.0 * search_bound + 1.0, static_cast<double>(n));
    if (cells > 2e6) {
        res.method = "search skipped, (2*" + std::to_string(search_bound) + "+1)^" + std::to_string(n) + " candidates";
        return res;
    }
    res.method = "bounded search, entries <= " + std::to_string(search_bound);
    std::vector<IntVector> iso;
    IntVector x(n, Integer(0));
    std::function<void(std::size_t)> enumerate = [&](std::size_t i) {
        if (i == n) {
            if (std::all_of(x.begin(), x.end(), [](const Integer& z) { return z == 0; })) return;
            if (primitive_form(x) != x) return;
            if (form(v.matrix(), x, x) == 0) iso.push_back(x);
            return;
        }
        for (int c = -search_bound; c <= search_bound; ++c) {
            x[i] = c;
            enumerate(i + 1);
        }
    };
    enumerate(0);
    std::sort(iso.begin(), iso.end());

    // orth[a][b]: the Seifert form vanishes on (iso[a], iso[b]) in both orders
    std::vector<std::vector<char>> orth(iso.size(), std::vector<char>(iso.size(), 0));
    for (std::size_t a = 0; a < iso.size(); ++a)
        for (std::size_t b = a + 1; b < iso.size(); ++b)
            orth[a][b] = orth[b][a] = form(v.matrix(), iso[a], iso[b]) == 0 && form(v.matrix(), iso[b], iso[a]) == 0;

    std::set<std::vector<std::vector<Rational>>> spans;
    std::vector<IntVector> frame;
    std::vector<std::size_t> picked;
    std::function<void(std::size_t)> build = [&](std::size_t start) {
        if (frame.size() == static_cast<std::size_t>(g)) {
            QMatrix r = span_rref(frame, n);
            std::vector<std::vector<Rational>> key;
            for (std::size_t i = 0; i < r.rows(); ++i) key.push_back(r.row(i));
            if (spans.count(key) || !is_summand(frame, n)) return;
            spans.insert(key);
            res.metabolizers.push_back(canonical(frame));
            return;
        }
        for (std::size_t k = start; k < iso.size(); ++k) {
            bool ok = true;
            for (std::size_t y : picked)
                if (!orth[y][k]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            frame.push_back(iso[k]);
            picked.push_back(k);
            if (rank(span_rref(frame, n)) == frame.size()) build(k + 1);
            frame.pop_back();
            picked.pop_back();
        }
    };
    build(0);
    std::sort(res.metabolizers.begin(), res.metabolizers.end());
    return res;
}

MetabolizerSearch find_metabolizers(const SeifertMatrix& v, int search_bound) {
    return higher_genus_metabolizers(v, search_bound);
}

Submodule metabolizer_to_lagrangian(const AlexanderModule& a, const Metabolizer& m) {
    const auto n = static_cast<std::size_t>(a.dimension());
    QMatrix gens(m.basis.size(), n, Rational(0));
    for (std::size_t i = 0; i < m.basis.size(); ++i) {
        QVector c = a.surface_class(m.basis[i]);
        for (std::size_t j = 0; j < n; ++j) gens(i, j) = c[j];
    }
    return a.span(gens);
}

Submodule metabolizer_to_lagrangian(const SeifertMatrix& v, const Metabolizer& m) {
    return metabolizer_to_lagrangian(AlexanderModule::present(v), m);
}

QVector quotient_coordinates(const Submodule& p, const QVector& x) {
    QVector r = x;
    std::vector<bool> pivot(x.size(), false);
    for (std::size_t i = 0; i < p.basis.rows(); ++i) {
        std::size_t c = 0;
        while (c < x.size() && p.basis(i, c) == 0) ++c;
        if (c == x.size()) continue;
        pivot[c] = true;
        Rational f = r[c] / p.basis(i, c);
        if (f == 0) continue;
        for (std::size_t j = 0; j < x.size(); ++j) r[j] -= f * p.basis(i, j);
    }
    QVector out;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (!pivot[j]) out.push_back(r[j]);
    return out;
}

Metabolizer a_band_metabolizer(int genus) {
    Metabolizer m;
    const auto n = static_cast<std::size_t>(2 * genus);
    for (std::size_t i = 0; i < static_cast<std::size_t>(genus); ++i) {
        IntVector e(n, Integer(0));
        e[2 * i] = 1;
        m.basis.push_back(e);
    }
    return m;
}

namespace {

[[noreturn]] void not_catalogued(const KnotSpec& spec, const Metabolizer& m, const std::string& why) {
    throw Error(ErrorKind::NotRepresentable, "no catalogued derivative of '" + spec.name + "' at " + m.to_string() +
                                                 ": " + why + " (declare the band data explicitly)");
}

KnotRef core_or_symbol(const KnotSpec& spec, const std::string& key) {
    auto it = spec.cores.find(key);
    return it != spec.cores.end() ? it->second : make_symbolic(key);
}

IntVector unit_vector(std::size_t n, std::size_t i) {
    IntVector e(n, Integer(0));
    e[i] = 1;
    return e;
}

// Component knot types and extra sites, ordered like m.basis.
void catalogue(const KnotSpec& spec, const Metabolizer& m, LinkSpec& out) {
    switch (spec.family) {
        case Family::Twist: {
            const IntVector& b = m.basis.at(0);
            if (b[0] != 1) not_catalogued(spec, m, "expected a vector (1, k)");
            long k = b[1].get_si();
            out.components.push_back(make_torus(k, 1 - k));
            out.tag = "knot";
            return;
        }
        case Family::GenusOne: {
            const IntVector& b = m.basis.at(0);
            if (b == unit_vector(2, 0)) out.components.push_back(core_or_symbol(spec, "L1"));
            else if (b == unit_vector(2, 1)) out.components.push_back(core_or_symbol(spec, "L2"));
            else not_catalogued(spec, m, "only the band cores are catalogued");
            out.tag = "knot";
            return;
        }
        case Family::GenusTwoFig9: {
            int i = 0, j = 0;
            std::vector<int> slot;
            for (const auto& b : m.basis) {
                if (b == unit_vector(4, 0)) i = 1, slot.push_back(0);
                else if (b == unit_vector(4, 1)) i = 2, slot.push_back(0);
                else if (b == unit_vector(4, 2)) j = 1, slot.push_back(1);
                else if (b == unit_vector(4, 3)) j = 2, slot.push_back(1);
                else not_catalogued(spec, m, "only blockwise band metabolizers are catalogued");
            }
            if (i == 0 || j == 0) not_catalogued(spec, m, "need one band from each block");
            for (int s : slot)
                out.components.push_back(s == 0 ? core_or_symbol(spec, "L" + std::to_string(i))
                                                : core_or_symbol(spec, "LL" + std::to_string(j)));
            IntVector bc = spec.b_curve.at(std::to_string(i) + std::to_string(j));
            IntVector image(2, Integer(0));
            for (std::size_t k = 0; k < 2; ++k) image[k] = bc[static_cast<std::size_t>(slot[k])];
            bool hit = bc[0] != 0 || bc[1] != 0;
            if (hit) out.sites.push_back({image, core_or_symbol(spec, "B")});
            out.tag = hit ? "boundary" : "split";
            return;
        }
        case Family::ConnectedSum: {
            std::size_t offset = 0;
            std::vector<std::pair<std::size_t, std::size_t>> ranges;
            for (const auto& s : spec.summands) {
                std::size_t sz = seifert_of(*s).size();
                ranges.emplace_back(offset, sz);
                offset += sz;
            }
            // Each basis vector must live inside one summand.
            std::vector<std::vector<std::size_t>> groups(spec.summands.size());
            for (std::size_t k = 0; k < m.basis.size(); ++k) {
                std::set<std::size_t> owners;
                for (std::size_t s = 0; s < ranges.size(); ++s)
                    for (std::size_t c = ranges[s].first; c < ranges[s].first + ranges[s].second; ++c)
                        if (m.basis[k][c] != 0) owners.insert(s);
                int owner = owners.size() == 1 ? static_cast<int>(*owners.begin()) : -1;
                if (owner < 0) not_catalogued(spec, m, "metabolizer is not blockwise");
                groups[static_cast<std::size_t>(owner)].push_back(k);
            }
            std::vector<KnotRef> comps(m.basis.size());
            out.tag = "split";
            for (std::size_t s = 0; s < spec.summands.size(); ++s) {
                if (groups[s].empty()) continue;
                Metabolizer local;
                for (std::size_t k : groups[s])
                    local.basis.emplace_back(m.basis[k].begin() + static_cast<long>(ranges[s].first),
                                             m.basis[k].begin() + static_cast<long>(ranges[s].first + ranges[s].second));
                LinkSpec sub;
                catalogue(*spec.summands[s], local, sub);
                for (std::size_t t = 0; t < groups[s].size(); ++t) comps[groups[s][t]] = sub.components[t];
                for (const auto& site : sub.sites) {
                    IntVector image(m.basis.size(), Integer(0));
                    for (std::size_t t = 0; t < groups[s].size(); ++t) image[groups[s][t]] = site.image[t];
                    out.sites.push_back({image, site.knot});
                }
                if (sub.tag != "knot" && sub.tag != "split") out.tag = "boundary";
            }
            out.components = comps;
            if (out.components.size() == 1) out.tag = "knot";
            return;
        }
        case Family::Explicit: {
            if (spec.bands.empty()) not_catalogued(spec, m, "explicit surface without band declarations");
            for (const auto& b : m.basis) {
                auto it = std::find_if(spec.bands.begin(), spec.bands.end(),
                                       [&](const Band& band) { return primitive_form(band.curve) == primitive_form(b); });
                if (it == spec.bands.end()) not_catalogued(spec, m, "a basis vector is not a declared band");
                out.components.push_back(it->core);
            }
            out.tag = out.components.size() == 1 ? "knot" : (spec.string_link.empty() ? "split" : spec.string_link);
            return;
        }
        default: not_catalogued(spec, m, std::string("family ") + family_name(spec.family) + " has no derivative catalogue");
    }
}

}  // namespace

DerivativeLink derivative(const KnotSpec& spec, const Metabolizer& m) {
    SeifertMatrix v = seifert_of(spec);
    if (!is_metabolizer(v, m)) throw Error(ErrorKind::InvalidArgument, m.to_string() + " is not a metabolizer of " + spec.name);
    DerivativeLink d;
    d.metabolizer = m;
    d.link.name = "d" + spec.name + "/d" + m.to_string();
    catalogue(spec, m, d.link);

    AlexanderModule a = AlexanderModule::present(v);
    Submodule p = metabolizer_to_lagrangian(a, m);
    d.rank = poly_degree(a.delta()) / 2;
    // Meridian of the i-th band: the generator combination c with c . b_k = delta_ik.
    const std::size_t g = m.basis.size(), n = v.size();
    QMatrix bt(g, n, Rational(0));
    for (std::size_t k = 0; k < g; ++k)
        for (std::size_t c = 0; c < n; ++c) bt(k, c) = m.basis[k][c];
    for (std::size_t i = 0; i < g; ++i) {
        QVector e(g, Rational(0)), c;
        e[i] = 1;
        solve(bt, e, c);
        std::vector<LaurentPoly> x;
        for (const auto& q : c) x.emplace_back(q);
        d.link.f.push_back(quotient_coordinates(p, a.class_of(x)));
    }
    return d;
}

KnotRef antiderivative(const std::vector<KnotRef>& j, const SeifertMatrix& target, int f_rank, const std::string& name) {
    const int g = target.genus();
    if (static_cast<int>(j.size()) != g)
        throw Error(ErrorKind::RankMismatch, std::to_string(j.size()) + " components for a genus " + std::to_string(g) + " surface");
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b)
            if (target(static_cast<std::size_t>(2 * a), static_cast<std::size_t>(2 * b)) != 0)
                throw Error(ErrorKind::NotMetabolic, "Seifert form does not vanish on the a-bands");
    if (f_rank >= 0 && poly_degree(alexander_poly(target)) != 2 * f_rank)
        throw Error(ErrorKind::RankMismatch, "deg Delta = " + std::to_string(poly_degree(alexander_poly(target))) +
                                                 " but f has rank " + std::to_string(f_rank));
    auto k = std::make_shared<KnotSpec>();
    k->name = name;
    k->family = Family::Explicit;
    k->matrix = target.matrix();
    k->string_link = "split";
    Metabolizer a = a_band_metabolizer(g);
    for (int i = 0; i < g; ++i) k->bands.push_back({a.basis[static_cast<std::size_t>(i)], j[static_cast<std::size_t>(i)]});
    return k;
}

}  // namespace slicekit
