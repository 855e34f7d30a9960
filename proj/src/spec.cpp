#include "slicekit/spec.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

#include "slicekit/errors.hpp"

namespace slicekit {

using json = nlohmann::ordered_json;

const char* family_name(Family f) {
    switch (f) {
        case Family::Symbolic: return "symbolic";
        case Family::Unknot: return "unknot";
        case Family::Twist: return "twist";
        case Family::Torus: return "torus";
        case Family::GenusOne: return "genus_one";
        case Family::GenusTwoFig9: return "genus_two_fig9";
        case Family::ConnectedSum: return "connected_sum";
        case Family::Explicit: return "explicit";
    }
    return "?";
}

bool KnotSpec::has_fact(const std::string& statement) const {
    return std::any_of(facts.begin(), facts.end(), [&](const Fact& f) { return f.statement == statement; });
}

QVector LinkSpec::meridian_image(std::size_t k) const {
    if (f.empty()) {
        QVector e(size(), Rational(0));
        e[k] = 1;
        return e;
    }
    return f.at(k);
}

QVector LinkSpec::site_image(const LinkSite& s) const {
    std::size_t d = f.empty() ? size() : f[0].size();
    QVector out(d, Rational(0));
    for (std::size_t k = 0; k < s.image.size() && k < size(); ++k) {
        QVector mk = meridian_image(k);
        for (std::size_t i = 0; i < d; ++i) out[i] += Rational(s.image[k]) * mk[i];
    }
    return out;
}

bool LinkSpec::f_is_zero() const {
    for (std::size_t k = 0; k < size(); ++k)
        if (!is_zero_vector(meridian_image(k))) return false;
    return true;
}

SeifertMatrix seifert_of(const KnotSpec& spec) {
    switch (spec.family) {
        case Family::Symbolic:
            throw Error(ErrorKind::NotRepresentable, "knot '" + spec.name + "' has no Seifert matrix");
        case Family::Unknot: return SeifertMatrix(IntMatrix(0, 0));
        case Family::Twist: return twist_knot(spec.tw);
        case Family::Torus: return torus_knot(spec.p, spec.q);
        case Family::GenusOne: return genus_one(spec.l, spec.tw);
        case Family::GenusTwoFig9: return connected_sum(genus_one(spec.l1, 0), genus_one(spec.l2, 0));
        case Family::ConnectedSum: {
            SeifertMatrix acc(IntMatrix(0, 0));
            for (const auto& s : spec.summands) acc = connected_sum(acc, seifert_of(*s));
            return acc;
        }
        case Family::Explicit: {
            const IntMatrix& v = *spec.matrix;
            if (v.rows() == v.cols() && v.rows() % 2 == 0 &&
                v - v.transpose() == standard_symplectic(static_cast<int>(v.rows() / 2)))
                return SeifertMatrix(v);
            return rebase(v);
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown family");
}

KnotRef make_symbolic(const std::string& name) {
    auto k = std::make_shared<KnotSpec>();
    k->name = name;
    return k;
}

KnotRef make_unknot(const std::string& name) {
    auto k = std::make_shared<KnotSpec>();
    k->name = name;
    k->family = Family::Unknot;
    return k;
}

std::string torus_name(long p, long q) { return "T(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

KnotRef make_torus(long p, long q) {
    auto k = std::make_shared<KnotSpec>();
    k->name = torus_name(p, q);
    k->family = Family::Torus;
    k->p = p;
    k->q = q;
    return k;
}

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
    throw Error(ErrorKind::Schema, path + ": " + msg);
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, _] : j.items())
        if (!ok.count(k)) schema(path, "unknown field '" + k + "'");
}

long get_long(const json& j, const char* key, const std::string& path, bool required = true, long dflt = 0) {
    if (!j.contains(key)) {
        if (required) schema(path, std::string("missing field '") + key + "'");
        return dflt;
    }
    if (!j[key].is_number_integer()) schema(path + "." + key, "expected an integer");
    return j[key].get<long>();
}

std::string get_string(const json& j, const char* key, const std::string& path, bool required = false) {
    if (!j.contains(key)) {
        if (required) schema(path, std::string("missing field '") + key + "'");
        return {};
    }
    if (!j[key].is_string()) schema(path + "." + key, "expected a string");
    return j[key].get<std::string>();
}

Integer to_integer(const json& x, const std::string& path) {
    if (x.is_number_integer()) return Integer(x.get<long>());
    if (x.is_string()) {
        Integer z;
        if (z.set_str(x.get<std::string>(), 10) != 0) schema(path, "bad integer");
        return z;
    }
    schema(path, "expected an integer");
}

IntVector int_vector(const json& j, const std::string& path) {
    if (!j.is_array()) schema(path, "expected an array of integers");
    IntVector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(to_integer(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

IntMatrix int_matrix(const json& j, const std::string& path) {
    if (!j.is_array()) schema(path, "expected an array of rows");
    std::size_t n = j.size();
    IntMatrix m(n, n, Integer(0));
    for (std::size_t i = 0; i < n; ++i) {
        IntVector row = int_vector(j[i], path + "[" + std::to_string(i) + "]");
        if (row.size() != n) schema(path, "matrix must be square");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = row[k];
    }
    return m;
}

QVector rational_vector(const json& j, const std::string& path) {
    if (!j.is_array()) schema(path, "expected an array");
    QVector v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& x = j[i];
        if (x.is_number_integer()) v.emplace_back(x.get<long>());
        else if (x.is_string()) {
            try {
                v.push_back(parse_rational(x.get<std::string>()));
            } catch (const Error&) {
                schema(path, "bad rational");
            }
        } else schema(path, "expected a rational");
    }
    return v;
}

KnotRef parse_spec(const json& j, const std::string& path);

std::vector<Fact> parse_facts(const json& j, const std::string& path) {
    if (!j.is_array()) schema(path, "expected an array");
    std::vector<Fact> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = path + "[" + std::to_string(i) + "]";
        if (j[i].is_string()) out.push_back({j[i].get<std::string>(), ""});
        else if (j[i].is_object()) {
            allow_keys(j[i], p, {"fact", "provenance"});
            out.push_back({get_string(j[i], "fact", p, true), get_string(j[i], "provenance", p)});
        } else schema(p, "expected a fact");
    }
    return out;
}

KnotRef parse_spec(const json& j, const std::string& path) {
    if (j.is_string()) {
        std::string name = j.get<std::string>();
        if (name.empty()) schema(path, "empty knot reference");
        if (name == "unknot") return make_unknot();
        return make_symbolic(name);
    }
    if (!j.is_object()) schema(path, "expected a knot spec object or name");
    allow_keys(j, path,
               {"name", "family", "tw", "p", "q", "l", "l1", "l2", "summands", "seifert", "cores", "string_link",
                "b_curve", "bands", "sites", "base_terms", "declared_derivatives", "facts"});
    auto k = std::make_shared<KnotSpec>();
    k->name = get_string(j, "name", path, true);
    std::string fam = get_string(j, "family", path);
    if (fam.empty() || fam == "symbolic") k->family = Family::Symbolic;
    else if (fam == "unknot") k->family = Family::Unknot;
    else if (fam == "twist") {
        k->family = Family::Twist;
        k->tw = get_long(j, "tw", path);
    } else if (fam == "torus") {
        k->family = Family::Torus;
        k->p = get_long(j, "p", path);
        k->q = get_long(j, "q", path);
    } else if (fam == "genus_one") {
        k->family = Family::GenusOne;
        k->l = get_long(j, "l", path);
        k->tw = get_long(j, "tw", path, false);
    } else if (fam == "genus_two_fig9") {
        k->family = Family::GenusTwoFig9;
        k->l1 = get_long(j, "l1", path);
        k->l2 = get_long(j, "l2", path);
        k->b_curve = {{"11", {1, 1}}, {"12", {0, 0}}, {"21", {1, 1}}, {"22", {1, 1}}};
    } else if (fam == "connected_sum") {
        k->family = Family::ConnectedSum;
        if (!j.contains("summands") || !j["summands"].is_array() || j["summands"].empty())
            schema(path, "connected_sum needs a nonempty 'summands' array");
        for (std::size_t i = 0; i < j["summands"].size(); ++i)
            k->summands.push_back(parse_spec(j["summands"][i], path + ".summands[" + std::to_string(i) + "]"));
    } else if (fam == "explicit") {
        k->family = Family::Explicit;
        if (!j.contains("seifert")) schema(path, "explicit family needs 'seifert'");
        k->matrix = int_matrix(j["seifert"], path + ".seifert");
    } else schema(path + ".family", "unknown family '" + fam + "'");

    if (j.contains("cores")) {
        if (!j["cores"].is_object()) schema(path + ".cores", "expected an object");
        for (const auto& [key, val] : j["cores"].items()) k->cores[key] = parse_spec(val, path + ".cores." + key);
    }
    k->string_link = get_string(j, "string_link", path);
    if (j.contains("b_curve")) {
        if (!j["b_curve"].is_object()) schema(path + ".b_curve", "expected an object");
        for (const auto& [key, val] : j["b_curve"].items()) {
            if (!k->b_curve.count(key)) schema(path + ".b_curve", "keys are 11, 12, 21, 22");
            k->b_curve[key] = int_vector(val, path + ".b_curve." + key);
            if (k->b_curve[key].size() != 2) schema(path + ".b_curve." + key, "expected 2 coefficients");
        }
    }
    if (j.contains("bands")) {
        if (!j["bands"].is_array()) schema(path + ".bands", "expected an array");
        for (std::size_t i = 0; i < j["bands"].size(); ++i) {
            std::string p = path + ".bands[" + std::to_string(i) + "]";
            const auto& b = j["bands"][i];
            if (!b.is_object()) schema(p, "expected an object");
            allow_keys(b, p, {"curve", "core"});
            if (!b.contains("curve") || !b.contains("core")) schema(p, "band needs 'curve' and 'core'");
            k->bands.push_back({int_vector(b["curve"], p + ".curve"), parse_spec(b["core"], p + ".core")});
        }
    }
    if (j.contains("sites")) {
        if (!j["sites"].is_array()) schema(path + ".sites", "expected an array");
        for (std::size_t i = 0; i < j["sites"].size(); ++i) {
            std::string p = path + ".sites[" + std::to_string(i) + "]";
            const auto& s = j["sites"][i];
            if (!s.is_object()) schema(p, "expected an object");
            allow_keys(s, p, {"eta", "eta_surface", "deeper", "knot"});
            InfectionSite site;
            int kinds = s.contains("eta") + s.contains("eta_surface") + s.contains("deeper");
            if (kinds != 1) schema(p, "exactly one of 'eta', 'eta_surface', 'deeper' is required");
            if (s.contains("eta")) site.eta = int_vector(s["eta"], p + ".eta");
            else if (s.contains("eta_surface")) {
                site.kind = InfectionSite::Kind::Surface;
                site.eta = int_vector(s["eta_surface"], p + ".eta_surface");
            } else {
                if (!s["deeper"].is_boolean() || !s["deeper"].get<bool>()) schema(p + ".deeper", "expected true");
                site.kind = InfectionSite::Kind::Deeper;
            }
            if (!s.contains("knot")) schema(p, "missing field 'knot'");
            site.knot = parse_spec(s["knot"], p + ".knot");
            k->sites.push_back(std::move(site));
        }
    }
    if (j.contains("base_terms")) {
        if (!j["base_terms"].is_array()) schema(path + ".base_terms", "expected an array");
        for (std::size_t i = 0; i < j["base_terms"].size(); ++i) {
            std::string p = path + ".base_terms[" + std::to_string(i) + "]";
            const auto& b = j["base_terms"][i];
            if (!b.is_object()) schema(p, "expected an object");
            allow_keys(b, p, {"submodule", "expr", "provenance"});
            k->base_terms.push_back(
                {get_string(b, "submodule", p, true), get_string(b, "expr", p, true), get_string(b, "provenance", p)});
        }
    }
    if (j.contains("declared_derivatives")) {
        if (!j["declared_derivatives"].is_array()) schema(path + ".declared_derivatives", "expected an array");
        for (std::size_t i = 0; i < j["declared_derivatives"].size(); ++i) {
            std::string p = path + ".declared_derivatives[" + std::to_string(i) + "]";
            const auto& d = j["declared_derivatives"][i];
            if (!d.is_object()) schema(p, "expected an object");
            allow_keys(d, p, {"name", "tag", "components", "nullity", "rho0f", "provenance"});
            DeclaredDerivative dd;
            dd.name = get_string(d, "name", p, true);
            dd.tag = get_string(d, "tag", p);
            dd.components = static_cast<int>(get_long(d, "components", p));
            if (dd.components < 1) schema(p + ".components", "must be positive");
            if (d.contains("nullity")) dd.nullity = static_cast<int>(get_long(d, "nullity", p));
            dd.rho0f = get_string(d, "rho0f", p, true);
            dd.provenance = get_string(d, "provenance", p);
            k->declared_derivatives.push_back(std::move(dd));
        }
    }
    if (j.contains("facts")) k->facts = parse_facts(j["facts"], path + ".facts");

    // Family parameters must give a valid matrix, and coordinates must fit it.
    if (k->concrete()) {
        SeifertMatrix v;
        try {
            v = seifert_of(*k);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Schema) throw;
            schema(path, std::string("family does not produce a Seifert matrix (") + e.what() + ")");
        }
        for (std::size_t i = 0; i < k->sites.size(); ++i)
            if (k->sites[i].kind != InfectionSite::Kind::Deeper && k->sites[i].eta.size() != v.size())
                schema(path + ".sites[" + std::to_string(i) + "]", "curve must have " + std::to_string(v.size()) + " coordinates");
        if (!k->bands.empty()) {
            if (k->family != Family::Explicit) schema(path + ".bands", "bands are declared only on explicit surfaces");
            if (!(*k->matrix - k->matrix->transpose() == standard_symplectic(v.genus())))
                schema(path + ".seifert", "a matrix with bands must already satisfy V - V^T = J");
            for (std::size_t i = 0; i < k->bands.size(); ++i)
                if (k->bands[i].curve.size() != v.size())
                    schema(path + ".bands[" + std::to_string(i) + "]", "curve has wrong length");
        }
    } else if (!k->sites.empty() || !k->bands.empty()) {
        schema(path, "symbolic knots cannot carry sites or bands");
    }
    return k;
}

json int_vector_json(const IntVector& v) {
    json a = json::array();
    for (const auto& z : v) {
        if (z.fits_slong_p()) a.push_back(z.get_si());
        else a.push_back(z.get_str());
    }
    return a;
}

json spec_json(const KnotSpec& k) {
    if (k.family == Family::Symbolic && k.facts.empty() && k.base_terms.empty() && k.declared_derivatives.empty())
        return k.name;
    json j;
    j["name"] = k.name;
    j["family"] = family_name(k.family);
    switch (k.family) {
        case Family::Twist: j["tw"] = k.tw; break;
        case Family::Torus:
            j["p"] = k.p;
            j["q"] = k.q;
            break;
        case Family::GenusOne:
            j["l"] = k.l;
            j["tw"] = k.tw;
            break;
        case Family::GenusTwoFig9: {
            j["l1"] = k.l1;
            j["l2"] = k.l2;
            json b;
            for (const auto& [key, v] : k.b_curve) b[key] = int_vector_json(v);
            j["b_curve"] = b;
            break;
        }
        case Family::ConnectedSum: {
            json s = json::array();
            for (const auto& x : k.summands) s.push_back(spec_json(*x));
            j["summands"] = s;
            break;
        }
        case Family::Explicit: {
            json rows = json::array();
            for (std::size_t i = 0; i < k.matrix->rows(); ++i) rows.push_back(int_vector_json(k.matrix->row(i)));
            j["seifert"] = rows;
            break;
        }
        default: break;
    }
    if (!k.cores.empty()) {
        json c;
        for (const auto& [key, v] : k.cores) c[key] = spec_json(*v);
        j["cores"] = c;
    }
    if (!k.string_link.empty()) j["string_link"] = k.string_link;
    if (!k.bands.empty()) {
        json b = json::array();
        for (const auto& band : k.bands) b.push_back({{"curve", int_vector_json(band.curve)}, {"core", spec_json(*band.core)}});
        j["bands"] = b;
    }
    if (!k.sites.empty()) {
        json s = json::array();
        for (const auto& site : k.sites) {
            json e;
            if (site.kind == InfectionSite::Kind::Generator) e["eta"] = int_vector_json(site.eta);
            else if (site.kind == InfectionSite::Kind::Surface) e["eta_surface"] = int_vector_json(site.eta);
            else e["deeper"] = true;
            e["knot"] = spec_json(*site.knot);
            s.push_back(e);
        }
        j["sites"] = s;
    }
    if (!k.base_terms.empty()) {
        json b = json::array();
        for (const auto& t : k.base_terms) {
            json e{{"submodule", t.submodule}, {"expr", t.expr}};
            if (!t.provenance.empty()) e["provenance"] = t.provenance;
            b.push_back(e);
        }
        j["base_terms"] = b;
    }
    if (!k.declared_derivatives.empty()) {
        json b = json::array();
        for (const auto& d : k.declared_derivatives) {
            json e{{"name", d.name}, {"tag", d.tag}, {"components", d.components}};
            if (d.nullity) e["nullity"] = *d.nullity;
            e["rho0f"] = d.rho0f;
            if (!d.provenance.empty()) e["provenance"] = d.provenance;
            b.push_back(e);
        }
        j["declared_derivatives"] = b;
    }
    if (!k.facts.empty()) {
        json f = json::array();
        for (const auto& x : k.facts) {
            json e{{"fact", x.statement}};
            if (!x.provenance.empty()) e["provenance"] = x.provenance;
            f.push_back(e);
        }
        j["facts"] = f;
    }
    return j;
}

LinkSpec parse_link(const json& j, const std::string& path) {
    allow_keys(j, path, {"name", "tag", "components", "sites", "f", "nullity"});
    LinkSpec l;
    l.name = get_string(j, "name", path, true);
    l.tag = get_string(j, "tag", path);
    if (l.tag.empty()) l.tag = "generic";
    static const std::set<std::string> tags{"knot", "split", "boundary", "infected_trivial", "figure12",
                                            "trivial_milnor", "declared", "generic"};
    if (!tags.count(l.tag)) schema(path + ".tag", "unknown link tag '" + l.tag + "'");
    if (!j["components"].is_array() || j["components"].empty()) schema(path + ".components", "expected a nonempty array");
    for (std::size_t i = 0; i < j["components"].size(); ++i)
        l.components.push_back(parse_spec(j["components"][i], path + ".components[" + std::to_string(i) + "]"));
    if (j.contains("sites")) {
        if (!j["sites"].is_array()) schema(path + ".sites", "expected an array");
        for (std::size_t i = 0; i < j["sites"].size(); ++i) {
            std::string p = path + ".sites[" + std::to_string(i) + "]";
            const auto& s = j["sites"][i];
            if (!s.is_object()) schema(p, "expected an object");
            allow_keys(s, p, {"image", "knot"});
            if (!s.contains("image") || !s.contains("knot")) schema(p, "site needs 'image' and 'knot'");
            LinkSite site{int_vector(s["image"], p + ".image"), parse_spec(s["knot"], p + ".knot")};
            if (site.image.size() != l.size()) schema(p + ".image", "one coefficient per component");
            l.sites.push_back(std::move(site));
        }
    }
    if (j.contains("f")) {
        if (!j["f"].is_array() || j["f"].size() != l.size()) schema(path + ".f", "one image per component");
        for (std::size_t i = 0; i < j["f"].size(); ++i) l.f.push_back(rational_vector(j["f"][i], path + ".f"));
        for (const auto& v : l.f)
            if (v.size() != l.f[0].size()) schema(path + ".f", "images must have equal length");
    }
    if (j.contains("nullity")) l.declared_nullity = static_cast<int>(get_long(j, "nullity", path));
    return l;
}

json link_json(const LinkSpec& l) {
    json j;
    j["name"] = l.name;
    j["tag"] = l.tag;
    json c = json::array();
    for (const auto& k : l.components) c.push_back(spec_json(*k));
    j["components"] = c;
    if (!l.sites.empty()) {
        json s = json::array();
        for (const auto& site : l.sites) s.push_back({{"image", int_vector_json(site.image)}, {"knot", spec_json(*site.knot)}});
        j["sites"] = s;
    }
    if (!l.f.empty()) {
        json f = json::array();
        for (const auto& v : l.f) {
            json row = json::array();
            for (const auto& q : v) row.push_back(to_string(q));
            f.push_back(row);
        }
        j["f"] = f;
    }
    if (l.declared_nullity) j["nullity"] = *l.declared_nullity;
    return j;
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t byte = std::min<std::size_t>(e.byte, text.size());
        long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(byte ? byte - 1 : 0), '\n');
        throw Error(ErrorKind::Schema, "line " + std::to_string(line) + ": malformed JSON");
    }
}

}  // namespace

Document parse_document(const std::string& text) {
    json j = parse_json_text(text);
    Document d;
    if (j.is_object() && j.contains("components")) d.link = parse_link(j, "$");
    else d.knot = parse_spec(j, "$");
    return d;
}

KnotRef parse_knot(const std::string& text) {
    Document d = parse_document(text);
    if (!d.knot) throw Error(ErrorKind::Schema, "$: expected a knot document, found a link");
    return d.knot;
}

std::string knot_to_json(const KnotSpec& spec, int indent) { return spec_json(spec).dump(indent); }

std::string link_to_json(const LinkSpec& link, int indent) { return link_json(link).dump(indent); }

void KnotRegistry::add(const KnotRef& spec) {
    if (!spec) return;
    auto it = specs_.find(spec->name);
    bool bare = !spec->concrete() && spec->facts.empty();
    if (it == specs_.end() || (!it->second->concrete() && (spec->concrete() || !bare))) specs_[spec->name] = spec;
    else if (spec->concrete() && it->second->concrete() && it->second != spec) {
        if (!(seifert_of(*spec) == seifert_of(*it->second)))
            throw Error(ErrorKind::Schema, "two different knots are both named '" + spec->name + "'");
    }
    for (const auto& s : spec->summands) add(s);
    for (const auto& [_, c] : spec->cores) add(c);
    for (const auto& b : spec->bands) add(b.core);
    for (const auto& s : spec->sites) add(s.knot);
}

void KnotRegistry::add(const LinkSpec& link) {
    for (const auto& c : link.components) add(c);
    for (const auto& s : link.sites) add(s.knot);
}

KnotRef KnotRegistry::find(const std::string& name) const {
    auto it = specs_.find(name);
    return it == specs_.end() ? nullptr : it->second;
}

}  // namespace slicekit
