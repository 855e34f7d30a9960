#include "slicekit/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

#include "slicekit/errors.hpp"

namespace slicekit {

using json = nlohmann::ordered_json;

const char* level_name(Level l) {
    switch (l) {
        case Level::Zeroth: return "zeroth";
        case Level::First: return "first";
        case Level::Second: return "second";
    }
    return "?";
}

const char* conclusion_name(Conclusion c) {
    switch (c) {
        case Conclusion::NotSlice: return "NotSlice";
        case Conclusion::Inconclusive: return "Inconclusive";
        case Conclusion::ConsistentWithSlice: return "ConsistentWithSlice";
    }
    return "?";
}

const char* cooper_status_name(CooperRow::Status s) {
    switch (s) {
        case CooperRow::Status::Satisfied: return "satisfied";
        case CooperRow::Status::Violated: return "violated";
        case CooperRow::Status::Undetermined: return "undetermined";
    }
    return "?";
}

EvalContext make_context(const KnotRef& spec, const Assumptions& assumptions, const Options& opts) {
    KnotRegistry reg;
    reg.add(spec);
    return EvalContext(std::move(reg), assumptions, opts.precision);
}

namespace {

bool uses_calculus(const KnotSpec& s) { return !s.sites.empty() || !s.base_terms.empty(); }

bool maximal_nullity(const LinkSpec& l) {
    auto n = nullity(l);
    return n && *n == static_cast<int>(l.size()) - 1;
}

std::string compact(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    return s;
}

std::string lagrangian_label(const Submodule& p) {
    return p.dimension() == 0 ? "P = 0" : "P of order " + normalize(p.order).to_string();
}

SigExpr rho0f(const LinkSpec& l) {
    if (l.f_is_zero()) return SigExpr();
    return rho0_of_infected_trivial_link(l);
}

void merge(std::vector<std::string>& into, const std::vector<std::string>& from) {
    into.insert(into.end(), from.begin(), from.end());
    std::sort(into.begin(), into.end());
    into.erase(std::unique(into.begin(), into.end()), into.end());
}

}  // namespace

Analysis analyze(const KnotRef& spec, const EvalContext& ctx, const Options& opts) {
    Analysis an;
    an.spec = spec;
    an.v = seifert_of(*spec);
    an.module = AlexanderModule::present(an.v);
    an.metabolizers = find_metabolizers(an.v, opts.search_bound);
    auto lags = lagrangians(an.module);
    std::sort(lags.begin(), lags.end(), submodule_less);
    for (auto& p : lags) an.lagrangians.push_back(LagrangianEntry{std::move(p), {}, std::nullopt, "", SigExpr(), "", {}});
    for (const auto& m : an.metabolizers.metabolizers) {
        Submodule p = metabolizer_to_lagrangian(an.module, m);
        for (auto& e : an.lagrangians)
            if (e.p == p) e.metabolizers.push_back(m);
    }
    const bool unit = an.module.delta().is_unit();
    for (auto& e : an.lagrangians) {
        if (!e.metabolizers.empty()) {
            try {
                e.derivative = derivative(*spec, e.metabolizers.front());
                for (const auto& c : e.derivative->link.components) ctx.learn(c);
                for (const auto& s : e.derivative->link.sites) ctx.learn(s.knot);
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::NotRepresentable) throw;
                e.derivative_note = err.what();
            }
        } else {
            e.derivative_note = an.metabolizers.complete ? "no integral metabolizer represents this Lagrangian"
                                                         : "no metabolizer found within the search bound";
        }
        if (unit) {
            e.value = SigExpr();
            e.route = "Alexander polynomial is a unit";
        } else if (uses_calculus(*spec)) {
            e.value = first_order_sig(*spec, an.module, e.p);
            e.route = "infection calculus";
        } else if (e.derivative && maximal_nullity(e.derivative->link)) {
            e.value = rho0f(e.derivative->link);
            e.route = "rho0^f of the derivative " + e.derivative->link.name;
        } else {
            e.value = SigExpr::rho1(spec->name + ";P=" + compact(normalize(e.p.order).to_string()));
            e.route = "opaque";
        }
        e.eval = evaluate(e.value, ctx);
    }
    return an;
}

Verdict zeroth_order_verdict(const KnotSpec& spec, const EvalContext& ctx) {
    Verdict v;
    v.level = Level::Zeroth;
    v.theorem = "slice knots have vanishing rho0";
    Evaluation e = evaluate(SigExpr::rho0(spec.name), ctx);
    v.assumptions = e.used;
    v.witness = "rho0(" + spec.name + ") = " + e.to_string();
    if (e.certified_nonzero) v.conclusion = Conclusion::NotSlice;
    else if (e.certified_zero) v.conclusion = Conclusion::ConsistentWithSlice;
    return v;
}

Verdict first_order_verdict(const Analysis& a, const EvalContext& ctx) {
    Verdict zero = zeroth_order_verdict(*a.spec, ctx);
    Verdict v;
    v.level = Level::First;
    v.theorem = "a slice knot has a Lagrangian with vanishing first-order signature";
    v.label = "also obstructs (1.5)-solvability";
    v.assumptions = zero.assumptions;
    if (zero.conclusion == Conclusion::NotSlice) {
        v.conclusion = Conclusion::NotSlice;
        v.witness = "inherited from zeroth order: " + zero.witness;
        return v;
    }
    if (a.lagrangians.empty()) {
        v.conclusion = Conclusion::NotSlice;
        v.witness = "no Lagrangian exists (not algebraically slice)";
        return v;
    }
    bool all_nonzero = true, all_zero = true;
    std::ostringstream w;
    for (std::size_t i = 0; i < a.lagrangians.size(); ++i) {
        const auto& e = a.lagrangians[i];
        merge(v.assumptions, e.eval.used);
        all_nonzero = all_nonzero && e.eval.certified_nonzero;
        all_zero = all_zero && e.eval.certified_zero;
        w << (i ? "; " : "") << lagrangian_label(e.p) << ": " << e.value.to_string() << " = " << e.eval.to_string();
    }
    v.witness = w.str();
    if (all_nonzero) v.conclusion = Conclusion::NotSlice;
    else if (all_zero) v.conclusion = Conclusion::ConsistentWithSlice;
    return v;
}

std::vector<SigExpr> SecondOrderSet::members() const {
    std::vector<SigExpr> out;
    for (const auto& b : branches)
        for (const auto& e : b.set) out.push_back(e.value);
    return out;
}

SecondOrderSet second_order_set(const Analysis& a, const EvalContext& ctx) {
    SecondOrderSet s;
    s.delta_unit = a.module.delta().is_unit();
    for (std::size_t i = 0; i < a.lagrangians.size(); ++i) {
        const auto& e = a.lagrangians[i];
        if (e.eval.certified_nonzero) continue;
        SecondOrderBranch b;
        b.lagrangian = i;
        b.certain = e.eval.certified_zero;
        if (s.delta_unit) {
            b.set = {{SigExpr(), "Alexander polynomial is a unit: all second-order signatures are zero"}};
        } else if (!e.derivative) {
            b.error = e.derivative_note.empty() ? "no catalogued derivative" : e.derivative_note;
        } else {
            try {
                b.set = first_order_sigs_of_supported_link(e.derivative->link, ctx);
            } catch (const Error& err) {
                if (!err.is_unsupported_shape() && err.kind() != ErrorKind::MissingBaseFact) throw;
                b.error = err.what();
            }
        }
        s.branches.push_back(std::move(b));
    }
    return s;
}

namespace {

// |x| > b certified for every x in the range.
bool exceeds(const Range& r, int b) {
    const Rational q = b;
    bool above = r.has_lo && (r.lo > q || (r.lo == q && r.lo_open));
    bool below = r.has_hi && (r.hi < -q || (r.hi == -q && r.hi_open));
    return above || below;
}

bool infected_trivial_like(const std::string& tag) {
    return tag == "knot" || tag == "split" || tag == "boundary" || tag == "infected_trivial";
}

}  // namespace

Verdict second_order_verdict(const Analysis& a, const SecondOrderSet& s, const EvalContext& ctx) {
    Verdict first = first_order_verdict(a, ctx);
    Verdict v;
    v.level = Level::Second;
    v.label = "also obstructs (2.5)-solvability";
    v.assumptions = first.assumptions;
    const int g = a.v.genus();
    if (first.conclusion == Conclusion::NotSlice) {
        v.conclusion = Conclusion::NotSlice;
        v.theorem = first.theorem;
        v.witness = first.witness.rfind("inherited", 0) == 0 ? first.witness : "inherited from first order: " + first.witness;
        return v;
    }
    // Infected trivial links satisfy the genus-one "contains zero" form at any genus.
    bool zero_rule = true;
    if (g > 1)
        for (const auto& b : s.branches) {
            const auto& e = a.lagrangians[b.lagrangian];
            if (!e.derivative || !infected_trivial_like(e.derivative->link.tag)) zero_rule = false;
        }
    v.theorem = zero_rule ? "a slice knot has a complete second-order set containing 0"
                          : "a slice knot has a second-order signature of absolute value at most genus - 1";
    std::ostringstream w;
    bool all_excluded = true, some_zero = false, errors = false;
    std::size_t count = 0;
    for (const auto& b : s.branches) {
        const auto& e = a.lagrangians[b.lagrangian];
        if (!b.error.empty()) {
            errors = true;
            w << (count++ ? "; " : "") << lagrangian_label(e.p) << ": " << b.error;
            continue;
        }
        for (const auto& m : b.set) {
            Evaluation ev = evaluate(m.value, ctx);
            merge(v.assumptions, ev.used);
            bool excluded = zero_rule ? ev.certified_nonzero : exceeds(ev.range, g - 1);
            all_excluded = all_excluded && excluded;
            bool within = zero_rule ? ev.certified_zero : cooper_status(ev, g - 1) == CooperRow::Status::Satisfied;
            some_zero = some_zero || (b.certain && within);
            w << (count++ ? "; " : "") << m.value.to_string() << " = " << ev.to_string();
        }
    }
    if (s.branches.empty()) w << "no Lagrangian can have vanishing first-order signature";
    v.witness = w.str();
    if (errors) v.conclusion = Conclusion::Inconclusive;
    else if (all_excluded) v.conclusion = Conclusion::NotSlice;
    else if (some_zero) v.conclusion = Conclusion::ConsistentWithSlice;
    return v;
}

std::optional<int> CooperRow::bound() const {
    if (!nullity) return std::nullopt;
    return components - 1 - *nullity;
}

CooperRow::Status cooper_status(const Evaluation& e, int bound) {
    const Rational b = bound;
    const Range& r = e.range;
    if (bound >= 0 && r.has_lo && r.has_hi && r.lo >= -b && r.hi <= b) return CooperRow::Status::Satisfied;
    if (exceeds(r, bound)) return CooperRow::Status::Violated;
    if (bound == 0 && e.certified_nonzero) return CooperRow::Status::Violated;
    if (bound < 0) return CooperRow::Status::Violated;
    return CooperRow::Status::Undetermined;
}

std::vector<CooperRow> cooper_check(const Analysis& a, const EvalContext& ctx) {
    std::vector<CooperRow> rows;
    for (const auto& e : a.lagrangians) {
        for (const auto& m : e.metabolizers) {
            CooperRow row;
            row.lagrangian = lagrangian_label(e.p);
            DerivativeLink d;
            try {
                d = derivative(*a.spec, m);
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::NotRepresentable) throw;
                row.derivative = "at " + m.to_string();
                row.note = err.what();
                rows.push_back(std::move(row));
                continue;
            }
            for (const auto& c : d.link.components) ctx.learn(c);
            for (const auto& s : d.link.sites) ctx.learn(s.knot);
            row.derivative = d.link.name;
            row.components = static_cast<int>(d.size());
            row.nullity = nullity(d.link);
            if (d.f_is_zero()) {
                row.value = SigExpr();
                row.eval = evaluate(row.value, ctx);
                row.status = CooperRow::Status::Satisfied;
                row.note = "f = 0, so rho0^f vanishes by definition";
                rows.push_back(std::move(row));
                continue;
            }
            if (!infected_trivial_like(d.link.tag)) {
                row.note = "rho0^f is not computable for link class '" + d.link.tag + "'";
                rows.push_back(std::move(row));
                continue;
            }
            row.value = rho0f(d.link);
            row.eval = evaluate(row.value, ctx);
            if (row.nullity) row.status = cooper_status(row.eval, *row.bound());
            if (row.components == 1) row.note = "knot derivative: rho0 = 0 required";
            rows.push_back(std::move(row));
        }
    }
    for (const auto& d : a.spec->declared_derivatives) {
        CooperRow row;
        row.lagrangian = "declared";
        row.derivative = d.name;
        row.components = d.components;
        row.nullity = d.components == 1 ? std::optional<int>(0) : d.nullity;
        row.value = SigExpr::parse(d.rho0f);
        row.eval = evaluate(row.value, ctx);
        if (row.nullity) row.status = cooper_status(row.eval, *row.bound());
        row.note = d.provenance;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

json vec_json(const QVector& v) {
    json a = json::array();
    for (const auto& q : v) a.push_back(to_string(q));
    return a;
}

json metabolizer_json(const Metabolizer& m) {
    json a = json::array();
    for (const auto& b : m.basis) {
        json row = json::array();
        for (const auto& z : b) row.push_back(z.get_si());
        a.push_back(row);
    }
    return a;
}

json submodule_json(const Submodule& p) {
    json b = json::array();
    for (std::size_t i = 0; i < p.basis.rows(); ++i) b.push_back(vec_json(p.basis.row(i)));
    return json{{"order", normalize(p.order).to_string()}, {"dimension", p.dimension()}, {"basis", b}};
}

json eval_json(const Evaluation& e) {
    json j{{"range", e.range.to_string()}, {"certified_zero", e.certified_zero}, {"certified_nonzero", e.certified_nonzero}};
    if (!e.residual.is_constant()) j["unresolved"] = e.residual.to_string();
    return j;
}

json verdict_json(const Verdict& v) {
    json j{{"level", level_name(v.level)}, {"conclusion", conclusion_name(v.conclusion)}, {"theorem", v.theorem}, {"witness", v.witness}};
    if (!v.label.empty()) j["label"] = v.label;
    j["assumptions"] = v.assumptions;
    return j;
}

std::string verdict_text(const Verdict& v) {
    std::ostringstream out;
    out << "  " << level_name(v.level) << " order: " << conclusion_name(v.conclusion) << "\n";
    out << "    obstruction: " << v.theorem << (v.label.empty() ? "" : " (" + v.label + ")") << "\n";
    out << "    witness: " << v.witness << "\n";
    for (const auto& a : v.assumptions) out << "    uses: " << a << "\n";
    return out.str();
}

const char* kOpenQuestion =
    "open: whether a slice knot always has a Seifert surface admitting a derivative of maximal Alexander nullity, "
    "or a trivial-link derivative, is not decided by this tool";

}  // namespace

Verdict inherited_verdict(const Verdict& zeroth, Level level) {
    Verdict v = zeroth;
    v.level = level;
    v.label = level == Level::First ? "also obstructs (1.5)-solvability" : "also obstructs (2.5)-solvability";
    v.witness = "inherited from zeroth order: " + zeroth.witness;
    return v;
}

namespace {

// Module-level analysis refused, but rho0 already obstructs.
std::string zeroth_only_report(const KnotRef& spec, const EvalContext& ctx, const Options& opts, Format format,
                               const Verdict& v0, const std::string& refusal) {
    SeifertMatrix v = seifert_of(*spec);
    SignatureFunction sf = signature_function(v, opts.precision);
    CertifiedReal r0 = rho0(v, opts.precision);
    std::vector<Verdict> vs{v0, inherited_verdict(v0, Level::First), inherited_verdict(v0, Level::Second)};
    (void)ctx;
    if (format == Format::Json) {
        json j;
        j["name"] = spec->name;
        j["family"] = family_name(spec->family);
        j["genus"] = v.genus();
        j["alexander"] = normalize(alexander_poly(v)).to_string();
        json arcs = json::array();
        for (const auto& a : sf.arcs)
            arcs.push_back({{"theta_lo_over_pi", a.theta_lo.to_string()}, {"theta_hi_over_pi", a.theta_hi.to_string()}, {"sigma", a.sigma}});
        j["signature_function"] = arcs;
        j["rho0"] = {{"mid", to_string(r0.mid)}, {"radius", to_string(r0.rad)}};
        json vj = json::array();
        for (const auto& x : vs) vj.push_back(verdict_json(x));
        j["verdicts"] = vj;
        j["assumptions_consumed"] = v0.assumptions;
        j["notes"].push_back("module analysis skipped: " + refusal);
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "knot " << spec->name << " (" << family_name(spec->family) << ", genus " << v.genus() << ")\n";
    out << "Alexander polynomial: " << normalize(alexander_poly(v)).to_string() << "\n";
    out << "signature function:\n";
    for (const auto& a : sf.arcs)
        out << "  theta/pi in [" << a.theta_lo.to_string() << ", " << a.theta_hi.to_string() << "]: " << a.sigma << "\n";
    out << "rho0 = " << r0.to_string() << "\n";
    out << "module analysis skipped: " << refusal << "\n";
    out << "verdicts:\n";
    for (const auto& x : vs) out << verdict_text(x);
    return out.str();
}

}  // namespace

std::string report(const KnotRef& spec, const Assumptions& assumptions, const Options& opts, Format format) {
    EvalContext ctx = make_context(spec, assumptions, opts);
    Verdict zeroth = zeroth_order_verdict(*spec, ctx);
    Analysis an;
    try {
        an = analyze(spec, ctx, opts);
    } catch (const Error& e) {
        if (!e.is_unsupported_shape() || zeroth.conclusion != Conclusion::NotSlice) throw;
        return zeroth_only_report(spec, ctx, opts, format, zeroth, e.what());
    }
    SignatureFunction sf = signature_function(an.v, opts.precision);
    Verdict v0 = zeroth;
    Verdict v1 = first_order_verdict(an, ctx);
    SecondOrderSet so = second_order_set(an, ctx);
    Verdict v2 = second_order_verdict(an, so, ctx);
    auto cooper = cooper_check(an, ctx);
    CertifiedReal r0 = rho0(an.v, opts.precision);

    std::vector<std::string> consumed;
    for (const Verdict* v : {&v0, &v1, &v2}) merge(consumed, v->assumptions);
    for (const auto& row : cooper) merge(consumed, row.eval.used);

    bool open_question = an.v.genus() > 1 || !spec->declared_derivatives.empty();

    if (format == Format::Json) {
        json j;
        j["name"] = spec->name;
        j["family"] = family_name(spec->family);
        j["genus"] = an.v.genus();
        j["seifert"] = to_matrix_text(an.v);
        j["alexander"] = normalize(an.module.delta()).to_string();
        json arcs = json::array();
        for (const auto& a : sf.arcs)
            arcs.push_back({{"theta_lo_over_pi", a.theta_lo.to_string()}, {"theta_hi_over_pi", a.theta_hi.to_string()}, {"sigma", a.sigma}});
        j["signature_function"] = arcs;
        j["rho0"] = {{"mid", to_string(r0.mid)}, {"radius", to_string(r0.rad)}};
        json ms = json::array();
        for (const auto& m : an.metabolizers.metabolizers) ms.push_back(metabolizer_json(m));
        j["metabolizers"] = {{"method", an.metabolizers.method}, {"complete", an.metabolizers.complete}, {"list", ms}};
        json ls = json::array();
        for (const auto& e : an.lagrangians) {
            json x = submodule_json(e.p);
            if (!e.metabolizers.empty()) x["chosen_metabolizer"] = metabolizer_json(e.metabolizers.front());
            if (opts.enumerate_metabolizers) {
                json alt = json::array();
                for (const auto& m : e.metabolizers) alt.push_back(metabolizer_json(m));
                x["metabolizers"] = alt;
            }
            if (e.derivative) {
                json comps = json::array();
                for (const auto& c : e.derivative->link.components) comps.push_back(c->name);
                json f = json::array();
                for (const auto& img : e.derivative->link.f) f.push_back(vec_json(img));
                x["derivative"] = {{"name", e.derivative->link.name}, {"tag", e.derivative->link.tag}, {"components", comps}, {"f", f}};
            } else if (!e.derivative_note.empty()) {
                x["derivative_note"] = e.derivative_note;
            }
            x["first_order"] = {{"expr", e.value.to_string()}, {"route", e.route}, {"value", eval_json(e.eval)}};
            ls.push_back(x);
        }
        j["lagrangians"] = ls;
        json sj = json::array();
        for (const auto& b : so.branches) {
            json x{{"lagrangian", lagrangian_label(an.lagrangians[b.lagrangian].p)}, {"certainly_in_P", b.certain}};
            if (!b.error.empty()) x["error"] = b.error;
            json set = json::array();
            for (const auto& m : b.set) set.push_back({{"expr", m.value.to_string()}, {"kernel", m.kernel}, {"value", eval_json(evaluate(m.value, ctx))}});
            x["set"] = set;
            sj.push_back(x);
        }
        j["second_order"] = {{"delta_unit", so.delta_unit}, {"branches", sj}};
        json cj = json::array();
        for (const auto& row : cooper) {
            json x{{"lagrangian", row.lagrangian}, {"derivative", row.derivative}, {"components", row.components}};
            x["nullity"] = row.nullity ? json(*row.nullity) : json("unknown");
            x["bound"] = row.bound() ? json(*row.bound()) : json("unknown");
            x["rho0f"] = row.value.to_string();
            x["value"] = eval_json(row.eval);
            x["status"] = cooper_status_name(row.status);
            if (!row.note.empty()) x["note"] = row.note;
            cj.push_back(x);
        }
        j["cooper"] = cj;
        j["verdicts"] = json::array({verdict_json(v0), verdict_json(v1), verdict_json(v2)});
        j["assumptions_consumed"] = consumed;
        if (so.delta_unit) j["notes"].push_back("Alexander polynomial is a unit: first- and second-order signatures are zero by definition");
        if (open_question) j["notes"].push_back(kOpenQuestion);
        return j.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "knot " << spec->name << " (" << family_name(spec->family) << ", genus " << an.v.genus() << ")\n";
    out << "Alexander polynomial: " << normalize(an.module.delta()).to_string() << "\n";
    out << "signature function:\n";
    for (const auto& a : sf.arcs)
        out << "  theta/pi in [" << a.theta_lo.to_string() << ", " << a.theta_hi.to_string() << "]: " << a.sigma << "\n";
    out << "rho0 = " << r0.to_string() << "\n";
    out << "metabolizers (" << an.metabolizers.method << (an.metabolizers.complete ? ", complete" : ", incomplete") << "):\n";
    for (const auto& m : an.metabolizers.metabolizers) out << "  " << m.to_string() << "\n";
    out << "Lagrangians: " << an.lagrangians.size() << "\n";
    for (const auto& e : an.lagrangians) {
        out << "  " << lagrangian_label(e.p) << "\n";
        if (!e.metabolizers.empty()) out << "    chosen metabolizer: " << e.metabolizers.front().to_string() << "\n";
        if (opts.enumerate_metabolizers)
            for (std::size_t k = 1; k < e.metabolizers.size(); ++k) out << "    alternative: " << e.metabolizers[k].to_string() << "\n";
        if (e.derivative) {
            out << "    derivative: " << e.derivative->link.name << " [" << e.derivative->link.tag << "] components";
            for (const auto& c : e.derivative->link.components) out << " " << c->name;
            out << "\n";
        } else if (!e.derivative_note.empty()) {
            out << "    derivative: " << e.derivative_note << "\n";
        }
        out << "    first-order signature: " << e.value.to_string() << " = " << e.eval.to_string() << " (" << e.route << ")\n";
    }
    out << "second-order set:";
    if (so.delta_unit)
        out << " all zero (Alexander polynomial is a unit)";
    else if (so.branches.empty())
        out << " empty (no Lagrangian has a vanishing first-order signature)";
    out << "\n";
    for (const auto& b : so.branches) {
        out << "  from " << lagrangian_label(an.lagrangians[b.lagrangian].p) << (b.certain ? "" : " (possibly in P)") << "\n";
        if (!b.error.empty()) out << "    error: " << b.error << "\n";
        for (const auto& m : b.set) out << "    " << m.value.to_string() << " = " << evaluate(m.value, ctx).to_string() << "\n";
    }
    out << "Cooper bound |rho0^f(J)| <= c - 1 - nullity:\n";
    for (const auto& row : cooper) {
        out << "  " << row.lagrangian << ", " << row.derivative << ": c = " << row.components
            << ", nullity = " << (row.nullity ? std::to_string(*row.nullity) : "unknown")
            << ", bound = " << (row.bound() ? std::to_string(*row.bound()) : "unknown") << ", rho0^f = " << row.value.to_string()
            << " = " << row.eval.to_string() << ": " << cooper_status_name(row.status) << "\n";
        if (!row.note.empty()) out << "    " << row.note << "\n";
    }
    out << "verdicts:\n" << verdict_text(v0) << verdict_text(v1) << verdict_text(v2);
    out << "assumptions consumed:" << (consumed.empty() ? " none" : "") << "\n";
    for (const auto& a : consumed) out << "  " << a << "\n";
    if (open_question) out << "note: " << kOpenQuestion << "\n";
    return out.str();
}

}  // namespace slicekit
