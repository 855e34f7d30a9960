#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "slicekit/calculus.hpp"
#include "slicekit/errors.hpp"
#include "test_support.hpp"

using namespace slicekit;

namespace {

std::string data(const std::string& file) {
    std::ifstream in(std::string(SLICEKIT_DATA_DIR) + "/" + file);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

IntVector iv(std::initializer_list<long> xs) {
    IntVector out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

std::vector<std::string> rendered(const std::vector<FirstOrderEntry>& set) {
    std::vector<std::string> out;
    for (const auto& e : set) out.push_back(e.value.to_string());
    std::sort(out.begin(), out.end());
    return out;
}

EvalContext context(const std::string& assumptions_json = "{}") {
    return EvalContext(KnotRegistry(), Assumptions::parse(assumptions_json), Rational(1, 1000000000));
}

KnotRef explicit_spec(const std::string& name, const SeifertMatrix& v) {
    auto k = std::make_shared<KnotSpec>();
    k->name = name;
    k->family = Family::Explicit;
    k->matrix = v.matrix();
    return k;
}

}  // namespace

TEST_CASE("calculus: expression algebra and canonical form") {
    SigExpr a = SigExpr::rho0("K1"), b = SigExpr::rho1("9_46"), c = SigExpr::rho0("B");
    CHECK((a + b + c).to_string() == "rho1(9_46) + rho0(B) + rho0(K1)");
    CHECK((a + a).to_string() == "2*rho0(K1)");
    CHECK((a - a).is_zero());
    CHECK((a - a).to_string() == "0");
    CHECK((Rational(-1) * c).to_string() == "-rho0(B)");
    CHECK((a + SigExpr(Rational(1, 2))).to_string() == "rho0(K1) + 1/2");
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + SigExpr() == a);
}

TEST_CASE("calculus: parse round trip") {
    for (const char* s : {"0", "rho0(L1) + 1", "2*rho0(K1)", "rho1(9_46) + rho0(J1) + rho0(J2)", "-rho0(T(2,3)) - 3/2",
                          "rho1(K;P=t-2) + rho0(LL1)"}) {
        SigExpr e = SigExpr::parse(s);
        CHECK(e.to_string() == s);
        CHECK(SigExpr::parse(e.to_string()) == e);
    }
    CHECK_THROWS_AS(SigExpr::parse("rho2(K)"), Error);
    CHECK_THROWS_AS(SigExpr::parse("rho0(K"), Error);
}

TEST_CASE("calculus: assumptions and evaluation") {
    auto ctx = context(R"j({"rho0(A)": "> 0", "rho0(B)": ">= 0", "rho0(C)": "!= 0", "rho1(X)": "= 1/2", "rho0(D)": "[1, 2]"})j");
    CHECK(evaluate(SigExpr::rho0("A") + SigExpr::rho0("B"), ctx).certified_nonzero);
    CHECK_FALSE(evaluate(SigExpr::rho0("B"), ctx).certified_nonzero);
    CHECK(evaluate(Rational(2) * SigExpr::rho0("C"), ctx).certified_nonzero);
    CHECK_FALSE(evaluate(SigExpr::rho0("C") + SigExpr::rho0("B"), ctx).certified_nonzero);
    auto x = evaluate(SigExpr::rho1("X") + SigExpr(Rational(-1, 2)), ctx);
    CHECK(x.certified_zero);
    CHECK(x.used.size() == 1);
    auto d = evaluate(SigExpr::rho0("D") - SigExpr(Rational(3)), ctx);
    CHECK(d.certified_nonzero);
    CHECK(d.range.to_string() == "[-2, -1]");
    auto u = evaluate(SigExpr::rho0("Z"), ctx);
    CHECK_FALSE(u.certified_zero);
    CHECK_FALSE(u.certified_nonzero);
    CHECK(u.residual.to_string() == "rho0(Z)");
    CHECK_THROWS_AS(Assumptions::parse(R"j({"rho0(A)": "about 3"})j"), Error);
}

TEST_CASE("calculus: concrete atoms resolve through the registry") {
    KnotRegistry reg;
    reg.add(make_torus(2, 3));
    reg.add(make_unknot());
    EvalContext ctx(reg, Assumptions(), Rational(1, 1000000000));
    auto t = evaluate(SigExpr::rho0("T(2,3)"), ctx);
    CHECK(t.certified_nonzero);
    CHECK(t.range.contains_zero() == false);
    CHECK(evaluate(SigExpr::rho0("U"), ctx).certified_zero);
    CHECK(evaluate(SigExpr::rho0("T(2,3)") + SigExpr(Rational(4, 3)), ctx).range.contains_zero());
}

TEST_CASE("calculus: infection sets for 9_46, figure eight and 8_9") {
    auto k45 = parse_knot(data("infection_9_46.json"));
    CHECK(rendered(first_order_sig_set(*k45)) ==
          std::vector<std::string>{"rho0(J1)", "rho0(J2)", "rho1(9_46) + rho0(J1) + rho0(J2)"});
    auto k46 = parse_knot(data("infection_fig8.json"));
    CHECK(rendered(first_order_sig_set(*k46)) == std::vector<std::string>{"2*rho0(J)"});
    auto k47 = parse_knot(data("infection_8_9.json"));
    auto set47 = first_order_sig_set(*k47);
    CHECK(rendered(set47) == std::vector<std::string>{"2*rho0(K1)", "2*rho0(K1)", "rho0(K1)"});
    CHECK(std::count_if(set47.begin(), set47.end(), [](const FirstOrderEntry& e) { return e.lagrangian; }) == 2);
}

TEST_CASE("calculus: declared slice base without infection gives zeros") {
    auto k = parse_knot(data("infection_8_9.json"));
    auto bare = std::make_shared<KnotSpec>(*k);
    bare->sites.clear();
    CHECK(rendered(first_order_sig_set(*bare)) == std::vector<std::string>{"0", "0", "0"});
}

TEST_CASE("calculus: first_order_sig errors") {
    auto k = parse_knot(data("infection_9_46.json"));
    auto a = AlexanderModule::present(seifert_of(*k));
    CHECK_THROWS_AS(first_order_sig(*k, a, a.whole()), Error);
    auto missing = std::make_shared<KnotSpec>(*k);
    missing->base_terms = {{"lagrangians", "0", ""}};
    CHECK_THROWS_AS(first_order_sig(*missing, a, a.zero()), Error);
}

TEST_CASE("calculus: unit Alexander polynomial") {
    auto k = explicit_spec("W", genus_one(0, 3));
    CHECK(rendered(first_order_sig_set(*k)) == std::vector<std::string>{"0"});
}

TEST_CASE("calculus: supported links") {
    auto ctx = context();
    LinkSpec trivial;
    trivial.tag = "split";
    trivial.components = {make_unknot(), make_unknot()};
    auto t = first_order_sigs_of_supported_link(trivial, ctx);
    REQUIRE(t.size() == 1);
    CHECK(t[0].value.is_zero());

    auto k45 = parse_knot(data("infection_9_46.json"));
    LinkSpec clasp;
    clasp.tag = "figure12";
    clasp.components = {k45, make_unknot("J2'")};
    std::vector<std::string> got;
    for (const auto& e : first_order_sigs_of_supported_link(clasp, ctx)) got.push_back(e.value.to_string());
    CHECK(got.size() == 6);
    CHECK(std::count(got.begin(), got.end(), "rho0(J1)") == 1);
    CHECK(std::count(got.begin(), got.end(), "rho0(J1) + rho0(J2')") == 1);

    LinkSpec split;
    split.tag = "split";
    split.components = {k45, make_unknot()};
    std::vector<std::string> s;
    for (const auto& e : first_order_sigs_of_supported_link(split, ctx)) s.push_back(e.value.to_string());
    std::sort(s.begin(), s.end());
    CHECK(s == rendered(first_order_sig_set(*k45)));

    LinkSpec generic;
    generic.tag = "generic";
    generic.components = {make_unknot(), make_symbolic("X")};
    CHECK_THROWS_AS(first_order_sigs_of_supported_link(generic, ctx), Error);
}

TEST_CASE("calculus: rho0 of infected trivial links") {
    LinkSpec j11;
    j11.tag = "boundary";
    j11.components = {make_symbolic("L1"), make_symbolic("LL1")};
    j11.sites = {{iv({1, 1}), make_symbolic("B")}};
    CHECK(rho0_of_infected_trivial_link(j11).to_string() == "rho0(B) + rho0(L1) + rho0(LL1)");
    LinkSpec j12;
    j12.tag = "split";
    j12.components = {make_symbolic("L1"), make_symbolic("LL2")};
    j12.sites = {{iv({0, 0}), make_symbolic("B")}};
    CHECK(rho0_of_infected_trivial_link(j12).to_string() == "rho0(L1) + rho0(LL2)");
    LinkSpec none;
    none.tag = "infected_trivial";
    none.components = {make_unknot(), make_unknot()};
    CHECK(rho0_of_infected_trivial_link(none).is_zero());
}

TEST_CASE("calculus: nullity rule table") {
    LinkSpec knot;
    knot.tag = "declared";
    knot.components = {make_symbolic("K")};
    knot.declared_nullity = 3;
    CHECK(nullity(knot) == 0);
    LinkSpec boundary;
    boundary.tag = "boundary";
    boundary.components = {make_symbolic("A"), make_symbolic("B")};
    CHECK(nullity(boundary) == 1);
    LinkSpec declared;
    declared.tag = "declared";
    declared.components = {make_symbolic("A"), make_symbolic("B")};
    declared.declared_nullity = 0;
    CHECK(nullity(declared) == 0);
    LinkSpec generic;
    generic.components = {make_symbolic("A"), make_symbolic("B")};
    CHECK_FALSE(nullity(generic).has_value());
}

TEST_CASE("calculus property: first-order signature is monotone in P") {
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> d(-2, 2), nsites(1, 4), kind(0, 1);
    auto base = parse_knot(data("infection_8_9.json"));
    std::vector<KnotRef> bases{base, explicit_spec("Tw2", twist_knot(2)), explicit_spec("Tw6", twist_knot(6))};
    for (int trial = 0; trial < 50; ++trial) {
        auto desc = std::make_shared<KnotSpec>(*bases[static_cast<std::size_t>(trial) % bases.size()]);
        const auto n = seifert_of(*desc).size();
        desc->sites.clear();
        desc->base_terms = {{"*", "0", ""}};
        int count = nsites(rng);
        for (int s = 0; s < count; ++s) {
            InfectionSite site;
            site.kind = kind(rng) ? InfectionSite::Kind::Surface : InfectionSite::Kind::Generator;
            site.eta.assign(n, Integer(0));
            for (auto& x : site.eta) x = d(rng);
            site.knot = make_symbolic("K" + std::to_string(s));
            desc->sites.push_back(site);
        }
        auto a = AlexanderModule::present(seifert_of(*desc));
        auto subs = isotropic_submodules(a);
        for (const auto& small : subs)
            for (const auto& big : subs) {
                bool nested = true;
                for (std::size_t r = 0; r < small.basis.rows(); ++r) nested = nested && big.contains(small.basis.row(r));
                if (!nested) continue;
                SigExpr lo = first_order_sig(*desc, a, small), hi = first_order_sig(*desc, a, big);
                for (const auto& [atom, coef] : hi.terms()) {
                    auto it = lo.terms().find(atom);
                    REQUIRE(it != lo.terms().end());
                    CHECK(coef <= it->second);
                }
            }
    }
}

TEST_CASE("calculus property: relabeling symmetry of the 9_46 infection set") {
    auto k = parse_knot(data("infection_9_46.json"));
    auto swapped = std::make_shared<KnotSpec>(*k);
    std::swap(swapped->sites[0].knot, swapped->sites[1].knot);
    auto a = rendered(first_order_sig_set(*k));
    auto b = rendered(first_order_sig_set(*swapped));
    for (auto& s : b) {
        auto j1 = s.find("J1"), j2 = s.find("J2");
        if (j1 != std::string::npos) s[j1 + 1] = '2';
        if (j2 != std::string::npos) s[j2 + 1] = '1';
    }
    for (auto& s : b) s = SigExpr::parse(s).to_string();
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("calculus property: evaluation of sums is contained in the sum of evaluations") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5), pick(0, 3);
    const char* kinds[] = {"> ", ">= ", "< ", "= "};
    for (int trial = 0; trial < 100; ++trial) {
        Assumptions as;
        for (const char* atom : {"rho0(A)", "rho0(B)"})
            as.set(atom, kinds[pick(rng)] + to_string(Rational(num(rng), den(rng))));
        EvalContext ctx(KnotRegistry(), as, Rational(1, 1000));
        Rational ca(num(rng), den(rng)), cb(num(rng), den(rng));
        SigExpr x = ca * SigExpr::rho0("A"), y = cb * SigExpr::rho0("B");
        Range sum = evaluate(x + y, ctx).range, parts = evaluate(x, ctx).range + evaluate(y, ctx).range;
        CHECK(sum.has_lo == parts.has_lo);
        CHECK(sum.has_hi == parts.has_hi);
        if (sum.has_lo) CHECK(sum.lo >= parts.lo);
        if (sum.has_hi) CHECK(sum.hi <= parts.hi);
    }
}
