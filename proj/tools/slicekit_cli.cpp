#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "slicekit/errors.hpp"
#include "slicekit/pipeline.hpp"

using namespace slicekit;
using json = nlohmann::ordered_json;

namespace {

struct Args {
    std::string input;
    std::string precision = "1/1000000000000";
    std::string assume;
    std::string format = "text";
    bool enumerate = false;
    int search_bound = 2;
};

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        return s.str();
    }
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Options options(const Args& a) {
    Options o;
    o.precision = parse_rational(a.precision);
    if (o.precision <= 0) throw Error(ErrorKind::InvalidArgument, "--precision must be positive");
    o.search_bound = a.search_bound;
    o.enumerate_metabolizers = a.enumerate;
    return o;
}

Assumptions assumptions(const Args& a) { return a.assume.empty() ? Assumptions() : Assumptions::parse(slurp(a.assume)); }

KnotRef knot_input(const Args& a) {
    Document d = parse_document(slurp(a.input));
    if (d.link) throw Error(ErrorKind::Schema, "this command expects a knot document, got a link");
    return d.knot;
}

bool as_json(const Args& a) { return a.format == "json"; }

json metabolizer_json(const Metabolizer& m) {
    json rows = json::array();
    for (const auto& b : m.basis) {
        json r = json::array();
        for (const auto& z : b) r.push_back(z.get_si());
        rows.push_back(r);
    }
    return rows;
}

std::string cmd_alexpoly(const Args& a) {
    auto v = seifert_of(*knot_input(a));
    auto d = normalize(alexander_poly(v));
    if (as_json(a)) return json{{"alexander", d.to_string()}}.dump(2) + "\n";
    return d.to_string() + "\n";
}

std::string cmd_sigfn(const Args& a) {
    auto f = signature_function(seifert_of(*knot_input(a)), options(a).precision);
    if (as_json(a)) {
        json arcs = json::array();
        for (const auto& arc : f.arcs)
            arcs.push_back({{"theta_lo_over_pi", arc.theta_lo.to_string()}, {"theta_hi_over_pi", arc.theta_hi.to_string()}, {"sigma", arc.sigma}});
        return arcs.dump(2) + "\n";
    }
    return signature_csv(f);
}

std::string cmd_rho0(const Args& a) {
    auto r = rho0(seifert_of(*knot_input(a)), options(a).precision);
    if (as_json(a))
        return json{{"mid", to_string(r.mid)}, {"radius", to_string(r.rad)}, {"decimal", to_decimal(r.mid, 15)}}.dump(2) + "\n";
    return r.to_string() + "\n";
}

std::string cmd_algslice(const Args& a) {
    auto s = find_metabolizers(seifert_of(*knot_input(a)), a.search_bound);
    bool yes = !s.metabolizers.empty();
    std::string answer = yes ? "yes" : (s.complete ? "no" : "unknown");
    if (as_json(a)) {
        json j{{"algebraically_slice", answer}, {"method", s.method}, {"complete", s.complete}};
        if (yes) j["witness"] = metabolizer_json(s.metabolizers.front());
        return j.dump(2) + "\n";
    }
    return answer + (yes ? " " + s.metabolizers.front().to_string() : "") + "\n";
}

std::string cmd_metabolizers(const Args& a) {
    auto s = find_metabolizers(seifert_of(*knot_input(a)), a.search_bound);
    if (as_json(a)) {
        json list = json::array();
        for (const auto& m : s.metabolizers) list.push_back(metabolizer_json(m));
        return json{{"method", s.method}, {"complete", s.complete}, {"metabolizers", list}}.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "# " << s.method << (s.complete ? ", complete" : ", incomplete") << "\n";
    for (const auto& m : s.metabolizers) out << m.to_string() << "\n";
    return out.str();
}

std::string cmd_lagrangians(const Args& a) {
    auto module = AlexanderModule::present(seifert_of(*knot_input(a)));
    auto ls = lagrangians(module);
    std::sort(ls.begin(), ls.end(), submodule_less);
    if (as_json(a)) {
        json list = json::array();
        for (const auto& p : ls) list.push_back({{"order", normalize(p.order).to_string()}, {"dimension", p.dimension()}, {"submodule", p.to_string()}});
        return json{{"alexander", normalize(module.delta()).to_string()}, {"lagrangians", list}}.dump(2) + "\n";
    }
    std::ostringstream out;
    for (const auto& p : ls) out << p.to_string() << "\n";
    return out.str();
}

std::string cmd_first_order(const Args& a) {
    Options o = options(a);
    Document d = parse_document(slurp(a.input));
    if (d.link) {
        KnotRegistry reg;
        for (const auto& c : d.link->components) reg.add(c);
        for (const auto& s : d.link->sites) reg.add(s.knot);
        EvalContext ctx(std::move(reg), assumptions(a), o.precision);
        auto set = first_order_sigs_of_supported_link(*d.link, ctx);
        json list = json::array();
        std::ostringstream out;
        for (const auto& e : set) {
            Evaluation ev = evaluate(e.value, ctx);
            list.push_back({{"expr", e.value.to_string()}, {"kernel", e.kernel}, {"value", ev.range.to_string()}});
            out << e.value.to_string() << " = " << ev.to_string() << "  [" << e.kernel << "]\n";
        }
        return as_json(a) ? list.dump(2) + "\n" : out.str();
    }
    EvalContext ctx = make_context(d.knot, assumptions(a), o);
    Analysis an = analyze(d.knot, ctx, o);
    json list = json::array();
    std::ostringstream out;
    for (const auto& e : an.lagrangians) {
        list.push_back({{"lagrangian", e.p.to_string()}, {"expr", e.value.to_string()}, {"route", e.route}, {"value", e.eval.range.to_string()}});
        out << e.p.to_string() << ": " << e.value.to_string() << " = " << e.eval.to_string() << "\n";
    }
    return as_json(a) ? list.dump(2) + "\n" : out.str();
}

std::string cmd_second_order(const Args& a) {
    Options o = options(a);
    KnotRef k = knot_input(a);
    EvalContext ctx = make_context(k, assumptions(a), o);
    Analysis an = analyze(k, ctx, o);
    SecondOrderSet s = second_order_set(an, ctx);
    json branches = json::array();
    std::ostringstream out;
    if (s.delta_unit) out << "# all second-order signatures are zero (Alexander polynomial is a unit)\n";
    for (const auto& b : s.branches) {
        const auto& e = an.lagrangians[b.lagrangian];
        json set = json::array();
        out << "# " << e.p.to_string() << (b.certain ? "" : " (possibly in P)");
        if (e.derivative) out << " via " << e.derivative->link.name;
        out << "\n";
        if (!b.error.empty()) out << "error: " << b.error << "\n";
        for (const auto& m : b.set) {
            Evaluation ev = evaluate(m.value, ctx);
            set.push_back({{"expr", m.value.to_string()}, {"value", ev.range.to_string()}});
            out << m.value.to_string() << " = " << ev.to_string() << "\n";
        }
        json x{{"lagrangian", e.p.to_string()}, {"certain", b.certain}, {"set", set}};
        if (e.derivative) x["derivative"] = e.derivative->link.name;
        if (!b.error.empty()) x["error"] = b.error;
        branches.push_back(x);
    }
    if (as_json(a)) return json{{"delta_unit", s.delta_unit}, {"branches", branches}}.dump(2) + "\n";
    return out.str();
}

std::string cmd_cooper(const Args& a) {
    Options o = options(a);
    KnotRef k = knot_input(a);
    EvalContext ctx = make_context(k, assumptions(a), o);
    Analysis an = analyze(k, ctx, o);
    json list = json::array();
    std::ostringstream out;
    for (const auto& r : cooper_check(an, ctx)) {
        std::string nul = r.nullity ? std::to_string(*r.nullity) : "unknown";
        std::string bound = r.bound() ? std::to_string(*r.bound()) : "unknown";
        list.push_back({{"lagrangian", r.lagrangian}, {"derivative", r.derivative}, {"components", r.components}, {"nullity", nul},
                        {"bound", bound}, {"rho0f", r.value.to_string()}, {"status", cooper_status_name(r.status)}});
        out << r.derivative << ": c=" << r.components << " nullity=" << nul << " bound=" << bound << " rho0f=" << r.value.to_string()
            << " -> " << cooper_status_name(r.status) << "\n";
    }
    return as_json(a) ? list.dump(2) + "\n" : out.str();
}

std::string cmd_verdict(const Args& a) {
    Options o = options(a);
    KnotRef k = knot_input(a);
    EvalContext ctx = make_context(k, assumptions(a), o);
    Verdict v0 = zeroth_order_verdict(*k, ctx);
    std::vector<Verdict> vs{v0};
    try {
        Analysis an = analyze(k, ctx, o);
        vs.push_back(first_order_verdict(an, ctx));
        vs.push_back(second_order_verdict(an, second_order_set(an, ctx), ctx));
    } catch (const Error& e) {
        if (!e.is_unsupported_shape() || v0.conclusion != Conclusion::NotSlice) throw;
        for (Level l : {Level::First, Level::Second}) vs.push_back(inherited_verdict(v0, l));
    }
    json list = json::array();
    std::ostringstream out;
    for (const auto& v : vs) {
        list.push_back({{"level", level_name(v.level)}, {"conclusion", conclusion_name(v.conclusion)}, {"witness", v.witness}});
        out << level_name(v.level) << ": " << conclusion_name(v.conclusion) << "  (" << v.witness << ")\n";
    }
    return as_json(a) ? list.dump(2) + "\n" : out.str();
}

std::string cmd_report(const Args& a) {
    return report(knot_input(a), assumptions(a), options(a), as_json(a) ? Format::Json : Format::Text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slicekit: concordance obstructions from Seifert matrices"};
    app.require_subcommand(1);
    Args args;

    using Handler = std::string (*)(const Args&);
    const std::vector<std::pair<std::string, Handler>> commands = {
        {"alexpoly", cmd_alexpoly},       {"sigfn", cmd_sigfn},     {"rho0", cmd_rho0},
        {"algslice", cmd_algslice},       {"metabolizers", cmd_metabolizers},
        {"lagrangians", cmd_lagrangians}, {"first-order", cmd_first_order},
        {"second-order", cmd_second_order}, {"cooper", cmd_cooper},
        {"verdict", cmd_verdict},         {"report", cmd_report},
    };
    Handler chosen = nullptr;
    for (const auto& [name, handler] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("input", args.input, "knot or link JSON document, - for stdin")->required();
        sub->add_option("--precision", args.precision, "target enclosure radius (rational)");
        sub->add_option("--assume", args.assume, "JSON file of assumptions on symbols");
        sub->add_option("--format", args.format)->check(CLI::IsMember({"text", "json", "csv"}));
        sub->add_flag("--enumerate-metabolizers", args.enumerate);
        sub->add_option("--search-bound", args.search_bound)->check(CLI::NonNegativeNumber);
        Handler h = handler;
        sub->callback([&chosen, h] { chosen = h; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (chosen == cmd_sigfn && args.format == "text") args.format = "csv";
    try {
        std::cout << chosen(args);
        return 0;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        if (e.kind() == ErrorKind::Schema) return 2;
        if (e.is_unsupported_shape()) return 3;
        return 1;
    }
}
