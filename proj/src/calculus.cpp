#include "slicekit/calculus.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

#include "slicekit/errors.hpp"

namespace slicekit {

std::string Atom::to_string() const { return (kind == Kind::Rho0 ? "rho0(" : "rho1(") + name + ")"; }

SigExpr SigExpr::atom(const Atom& a) {
    SigExpr e;
    e.terms_[a] = 1;
    return e;
}

SigExpr SigExpr::rho0(const std::string& knot) { return atom({Atom::Kind::Rho0, knot}); }
SigExpr SigExpr::rho1(const std::string& name) { return atom({Atom::Kind::Rho1Sym, name}); }

SigExpr& SigExpr::operator+=(const SigExpr& o) {
    constant_ += o.constant_;
    for (const auto& [a, c] : o.terms_) {
        Rational& slot = terms_[a];
        slot += c;
        if (slot == 0) terms_.erase(a);
    }
    return *this;
}

SigExpr& SigExpr::operator-=(const SigExpr& o) { return *this += Rational(-1) * o; }

SigExpr operator*(const Rational& c, const SigExpr& e) {
    SigExpr out;
    if (c == 0) return out;
    out.constant_ = c * e.constant_;
    for (const auto& [a, k] : e.terms_) out.terms_[a] = c * k;
    return out;
}

std::string SigExpr::to_string() const {
    std::ostringstream out;
    bool first = true;
    auto emit = [&](const Rational& c, const std::string& body) {
        Rational mag = abs_value(c);
        if (first) out << (c < 0 ? "-" : "");
        else out << (c < 0 ? " - " : " + ");
        first = false;
        if (body.empty()) out << slicekit::to_string(mag);
        else if (mag == 1) out << body;
        else out << slicekit::to_string(mag) << "*" << body;
    };
    for (const auto& [a, c] : terms_) emit(c, a.to_string());
    if (constant_ != 0 || terms_.empty()) emit(constant_, "");
    return out.str();
}

SigExpr SigExpr::parse(const std::string& text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto skip = [&] {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto fail = [&](const std::string& why) -> SigExpr {
        throw Error(ErrorKind::InvalidArgument, "bad signature expression '" + text + "': " + why);
    };
    SigExpr out;
    skip();
    if (i == n) fail("empty");
    bool first = true;
    while (true) {
        skip();
        if (i == n) break;
        Rational sgn = 1;
        if (text[i] == '+' || text[i] == '-') {
            sgn = text[i] == '-' ? -1 : 1;
            ++i;
            skip();
        } else if (!first) {
            fail("expected + or -");
        }
        first = false;
        Rational coef = 1;
        bool have_num = false;
        std::size_t start = i;
        while (i < n && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/' || text[i] == '.')) ++i;
        if (i > start) {
            coef = parse_rational(text.substr(start, i - start));
            have_num = true;
            skip();
            if (i < n && text[i] == '*') {
                ++i;
                skip();
            } else {
                out += SigExpr(Rational(sgn * coef));
                continue;
            }
        }
        Atom::Kind kind;
        if (text.compare(i, 5, "rho0(") == 0) kind = Atom::Kind::Rho0;
        else if (text.compare(i, 5, "rho1(") == 0) kind = Atom::Kind::Rho1Sym;
        else return fail(have_num ? "expected an atom after '*'" : "expected a number or atom");
        i += 5;
        int depth = 1;
        std::size_t name_start = i;
        while (i < n && depth > 0) {
            if (text[i] == '(') ++depth;
            else if (text[i] == ')') --depth;
            ++i;
        }
        if (depth != 0) fail("unbalanced parentheses");
        std::string name = text.substr(name_start, i - 1 - name_start);
        if (name.empty()) fail("empty atom name");
        out += Rational(sgn * coef) * atom({kind, name});
    }
    return out;
}

Range Range::point(const Rational& q) { return Range{true, true, false, false, q, q}; }

Range Range::everything() { return Range{false, false, true, true, 0, 0}; }

Range Range::operator+(const Range& o) const {
    Range r;
    r.has_lo = has_lo && o.has_lo;
    r.has_hi = has_hi && o.has_hi;
    if (r.has_lo) {
        r.lo = lo + o.lo;
        r.lo_open = lo_open || o.lo_open;
    } else r.lo_open = true;
    if (r.has_hi) {
        r.hi = hi + o.hi;
        r.hi_open = hi_open || o.hi_open;
    } else r.hi_open = true;
    return r;
}

Range Range::scaled(const Rational& c) const {
    if (c == 0) return point(0);
    Range r = *this;
    if (c > 0) {
        r.lo = lo * c;
        r.hi = hi * c;
        return r;
    }
    r.has_lo = has_hi;
    r.has_hi = has_lo;
    r.lo_open = hi_open;
    r.hi_open = lo_open;
    r.lo = hi * c;
    r.hi = lo * c;
    return r;
}

bool Range::contains_zero() const {
    bool above_lo = !has_lo || lo < 0 || (lo == 0 && !lo_open);
    bool below_hi = !has_hi || hi > 0 || (hi == 0 && !hi_open);
    return above_lo && below_hi;
}

std::string Range::to_string() const {
    if (has_lo && has_hi && lo == hi && !lo_open && !hi_open) return slicekit::to_string(lo);
    std::string s = lo_open ? "(" : "[";
    s += has_lo ? slicekit::to_string(lo) : "-inf";
    s += ", ";
    s += has_hi ? slicekit::to_string(hi) : "+inf";
    s += hi_open ? ")" : "]";
    return s;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\n");
    auto e = s.find_last_not_of(" \t\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

Assumption parse_constraint(const std::string& atom, const std::string& raw) {
    std::string s = trim(raw);
    auto bad = [&]() -> Assumption {
        throw Error(ErrorKind::Schema, "assumption for " + atom + ": cannot read '" + raw + "'");
    };
    Assumption a;
    a.text = atom + " " + s;
    try {
        if (s.empty()) return bad();
        if (s[0] == '[' || s[0] == '(') {
            auto comma = s.find(',');
            char close = s.back();
            if (comma == std::string::npos || (close != ']' && close != ')')) return bad();
            std::string lo = trim(s.substr(1, comma - 1)), hi = trim(s.substr(comma + 1, s.size() - comma - 2));
            a.kind = Assumption::Kind::Interval;
            a.range = Range::everything();
            if (lo != "-inf") {
                a.range.has_lo = true;
                a.range.lo = parse_rational(lo);
                a.range.lo_open = s[0] == '(';
            }
            if (hi != "+inf" && hi != "inf") {
                a.range.has_hi = true;
                a.range.hi = parse_rational(hi);
                a.range.hi_open = close == ')';
            }
            if (a.range.has_lo && a.range.has_hi && a.range.lo > a.range.hi) return bad();
            return a;
        }
        if (s.rfind("!=", 0) == 0) {
            if (parse_rational(s.substr(2)) != 0) return bad();
            a.kind = Assumption::Kind::NonZero;
            a.range = Range::everything();
            return a;
        }
        std::string op;
        for (const char* cand : {">=", "<=", ">", "<", "="})
            if (s.rfind(cand, 0) == 0) {
                op = cand;
                break;
            }
        Rational q = parse_rational(s.substr(op.size()));
        if (op.empty() || op == "=") {
            a.kind = Assumption::Kind::Value;
            a.range = Range::point(q);
            a.text = atom + " = " + slicekit::to_string(q);
            return a;
        }
        a.kind = Assumption::Kind::Interval;
        a.range = Range::everything();
        if (op[0] == '>') {
            a.range.has_lo = true;
            a.range.lo = q;
            a.range.lo_open = op == ">";
        } else {
            a.range.has_hi = true;
            a.range.hi = q;
            a.range.hi_open = op == "<";
        }
        return a;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Schema) throw;
        return bad();
    }
}

}  // namespace

Assumptions Assumptions::parse(const std::string& json_text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error&) {
        throw Error(ErrorKind::Schema, "assumption file is not valid JSON");
    }
    if (!j.is_object()) throw Error(ErrorKind::Schema, "assumption file must be a JSON object");
    Assumptions out;
    for (const auto& [k, v] : j.items()) {
        std::string val;
        if (v.is_string()) val = v.get<std::string>();
        else if (v.is_number_integer()) val = std::to_string(v.get<long>());
        else throw Error(ErrorKind::Schema, "assumption for " + k + " must be a string or integer");
        SigExpr probe = SigExpr::parse(k);
        if (probe.terms().size() != 1 || probe.terms().begin()->second != 1 || probe.constant() != 0)
            throw Error(ErrorKind::Schema, "assumption key '" + k + "' is not a single atom");
        out.set(probe.terms().begin()->first.to_string(), val);
    }
    return out;
}

void Assumptions::set(const std::string& atom, const std::string& constraint) {
    by_atom_[atom] = parse_constraint(atom, constraint);
}

const Assumption* Assumptions::find(const std::string& atom) const {
    auto it = by_atom_.find(atom);
    return it == by_atom_.end() ? nullptr : &it->second;
}

std::string Evaluation::to_string() const {
    if (exact()) return slicekit::to_string(range.lo);
    // Long enclosure endpoints are shown as decimals.
    auto end = [](const Rational& q) {
        std::string t = slicekit::to_string(q);
        return t.size() > 24 ? to_decimal(q, 15) : t;
    };
    std::string s = range.lo_open ? "(" : "[";
    s += (range.has_lo ? end(range.lo) : "-inf") + ", " + (range.has_hi ? end(range.hi) : "+inf");
    s += range.hi_open ? ")" : "]";
    if (certified_nonzero && range.contains_zero()) s = "nonzero";
    if (!residual.is_constant()) s += " (unresolved: " + residual.to_string() + ")";
    return s;
}

EvalContext::EvalContext(KnotRegistry registry, Assumptions assumptions, Rational target_radius)
    : registry_(std::move(registry)), assumptions_(std::move(assumptions)), radius_(std::move(target_radius)) {}

KnotRef EvalContext::resolve(const KnotRef& k) const {
    if (!k) return k;
    KnotRef r = registry_.find(k->name);
    if (r && (r->concrete() || !k->concrete())) return r;
    return k;
}

void EvalContext::learn(const KnotRef& k) const {
    if (k && !registry_.find(k->name)) registry_.add(k);
}

std::optional<CertifiedReal> EvalContext::rho0_of(const std::string& name) const {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    KnotRef k = registry_.find(name);
    if (!k || !k->concrete()) return std::nullopt;
    CertifiedReal r = rho0(seifert_of(*k), radius_);
    cache_[name] = r;
    return r;
}

Evaluation evaluate(const SigExpr& e, const EvalContext& ctx) {
    Evaluation out;
    Range known = Range::point(e.constant());
    int nonzero_atoms = 0, unresolved = 0;
    for (const auto& [atom, c] : e.terms()) {
        const std::string key = atom.to_string();
        if (const Assumption* a = ctx.assumptions().find(key)) {
            out.used.push_back(a->text);
            if (a->kind == Assumption::Kind::NonZero) {
                ++nonzero_atoms;
                out.residual += c * SigExpr::atom(atom);
            } else {
                known = known + a->range.scaled(c);
                if (a->kind == Assumption::Kind::Interval) out.residual += c * SigExpr::atom(atom);
            }
            continue;
        }
        if (atom.kind == Atom::Kind::Rho0) {
            if (auto r = ctx.rho0_of(atom.name)) {
                Range iv{true, true, false, false, r->lo(), r->hi()};
                known = known + iv.scaled(c);
                continue;
            }
            KnotRef k = ctx.registry().find(atom.name);
            if (k && (k->has_fact("slice") || k->has_fact("algebraically_slice"))) {
                out.used.push_back(atom.name + " algebraically slice, so " + key + " = 0");
                continue;
            }
        }
        ++unresolved;
        out.residual += c * SigExpr::atom(atom);
    }
    std::sort(out.used.begin(), out.used.end());
    out.used.erase(std::unique(out.used.begin(), out.used.end()), out.used.end());
    const bool open = nonzero_atoms > 0 || unresolved > 0;
    out.range = open ? Range::everything() : known;
    if (nonzero_atoms == 0 && unresolved == 0) {
        out.certified_zero = known.is_point_zero();
        out.certified_nonzero = !known.contains_zero();
    } else if (nonzero_atoms == 1 && unresolved == 0 && known.is_point_zero()) {
        out.certified_nonzero = true;
    }
    return out;
}

namespace {

std::string compact(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    return s;
}

SigExpr base_term(const KnotSpec& desc, const AlexanderModule& a, const Submodule& p) {
    if (desc.base_terms.empty()) {
        if (p.dimension() == 0) return SigExpr::rho1(desc.name);
        return SigExpr::rho1(desc.name + ";P=" + compact(normalize(p.order).to_string()));
    }
    for (const auto& t : desc.base_terms) {
        bool match = false;
        if (t.submodule == "*") match = true;
        else if (t.submodule == "0") match = p.dimension() == 0;
        else if (t.submodule == "lagrangians") match = is_lagrangian(a, p);
        else {
            try {
                match = p.dimension() > 0 && normalize(parse_laurent(t.submodule)) == normalize(p.order);
            } catch (const Error&) {
                throw Error(ErrorKind::Schema, "base term submodule '" + t.submodule + "' is not recognised");
            }
        }
        if (match) return SigExpr::parse(t.expr);
    }
    throw Error(ErrorKind::MissingBaseFact, "no base term of '" + desc.name + "' covers the submodule " + p.to_string());
}

}  // namespace

SigExpr first_order_sig(const KnotSpec& desc, const AlexanderModule& a, const Submodule& p) {
    if (!is_isotropic(a, p)) throw Error(ErrorKind::NotIsotropic, "submodule " + p.to_string() + " is not isotropic");
    if (a.delta().is_unit()) return SigExpr();
    SigExpr e = base_term(desc, a, p);
    for (const auto& s : desc.sites) {
        if (s.kind == InfectionSite::Kind::Deeper) continue;
        QVector cls = s.kind == InfectionSite::Kind::Generator ? a.generator_class(s.eta) : a.surface_class(s.eta);
        if (!p.contains(cls)) e += SigExpr::rho0(s.knot->name);
    }
    return e;
}

SigExpr first_order_sig(const KnotSpec& desc, const Submodule& p) {
    return first_order_sig(desc, AlexanderModule::present(seifert_of(desc)), p);
}

std::vector<FirstOrderEntry> first_order_sig_set(const KnotSpec& desc) {
    AlexanderModule a = AlexanderModule::present(seifert_of(desc));
    if (a.delta().is_unit()) return {FirstOrderEntry{a.zero(), true, SigExpr()}};
    auto subs = isotropic_submodules(a);
    std::sort(subs.begin(), subs.end(), submodule_less);
    std::vector<FirstOrderEntry> out;
    for (const auto& p : subs) out.push_back({p, is_lagrangian(a, p), first_order_sig(desc, a, p)});
    return out;
}

std::vector<SigExpr> knot_first_order_values(const KnotRef& knot, const EvalContext& ctx) {
    KnotRef k = ctx.resolve(knot);
    if (!k->concrete()) return {SigExpr::rho1(k->name)};
    std::vector<SigExpr> out;
    for (const auto& e : first_order_sig_set(*k)) out.push_back(e.value);
    return out;
}

std::vector<LinkSigEntry> first_order_sigs_of_supported_link(const LinkSpec& link, const EvalContext& ctx) {
    if (link.f_is_zero()) return {{SigExpr(), "f = 0"}};
    const std::string& tag = link.tag;
    std::vector<LinkSigEntry> out;
    if (tag == "knot") {
        if (link.size() != 1) throw Error(ErrorKind::UnsupportedLink, "knot tag on a " + std::to_string(link.size()) + "-component link");
        for (auto& s : knot_first_order_values(link.components[0], ctx)) out.push_back({s, "first-order set of " + link.components[0]->name});
        return out;
    }
    if (tag == "figure12") {
        if (link.size() != 2) throw Error(ErrorKind::UnsupportedLink, "clasp pattern needs two components");
        const std::string j1 = link.components[0]->name, j2 = link.components[1]->name;
        for (auto& s : knot_first_order_values(link.components[0], ctx)) {
            out.push_back({s, "meridian of " + j2 + " in the kernel"});
            out.push_back({s + SigExpr::rho0(j2), "meridian of " + j2 + " survives"});
        }
        return out;
    }
    if (tag == "split" || tag == "boundary" || tag == "infected_trivial") {
        SigExpr extra;
        for (const auto& s : link.sites)
            if (!is_zero_vector(link.site_image(s))) extra += SigExpr::rho0(s.knot->name);
        std::vector<LinkSigEntry> acc{{extra, ""}};
        for (std::size_t k = 0; k < link.size(); ++k) {
            std::vector<SigExpr> vals;
            if (is_zero_vector(link.meridian_image(k))) vals = {SigExpr()};
            else vals = knot_first_order_values(link.components[k], ctx);
            std::vector<LinkSigEntry> next;
            for (const auto& a : acc)
                for (std::size_t v = 0; v < vals.size(); ++v)
                    next.push_back({a.value + vals[v], a.kernel + (a.kernel.empty() ? "" : ", ") + link.components[k]->name +
                                                           "#" + std::to_string(v + 1)});
            acc = std::move(next);
        }
        return acc;
    }
    throw Error(ErrorKind::UnsupportedLink, "link '" + link.name + "' with tag '" + tag + "' is outside the supported catalogue");
}

SigExpr rho0_of_infected_trivial_link(const LinkSpec& link) {
    SigExpr e;
    for (std::size_t k = 0; k < link.size(); ++k)
        if (link.components[k]->family != Family::Unknot && !is_zero_vector(link.meridian_image(k)))
            e += SigExpr::rho0(link.components[k]->name);
    for (const auto& s : link.sites)
        if (s.knot->family != Family::Unknot && !is_zero_vector(link.site_image(s))) e += SigExpr::rho0(s.knot->name);
    return e;
}

std::optional<int> nullity(const LinkSpec& link) {
    const int m = static_cast<int>(link.size());
    if (m == 1) return 0;
    if (link.declared_nullity) return link.declared_nullity;
    static const char* maximal[] = {"split", "boundary", "trivial_milnor", "infected_trivial"};
    if (std::none_of(std::begin(maximal), std::end(maximal), [&](const char* t) { return link.tag == t; })) return std::nullopt;
    // Maximal nullity needs f to be the abelianization: meridian images independent.
    if (!link.f.empty()) {
        QMatrix f(link.f.size(), link.f[0].size(), Rational(0));
        for (std::size_t i = 0; i < link.f.size(); ++i)
            for (std::size_t j = 0; j < link.f[i].size(); ++j) f(i, j) = link.f[i][j];
        if (static_cast<int>(rank(f)) != m) return std::nullopt;
    }
    return m - 1;
}

}  // namespace slicekit
