#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slicekit/calculus.hpp"
#include "slicekit/metabolizers.hpp"
#include "slicekit/spec.hpp"

namespace slicekit {

enum class Level { Zeroth, First, Second };
enum class Conclusion { NotSlice, Inconclusive, ConsistentWithSlice };

const char* level_name(Level l);
const char* conclusion_name(Conclusion c);

struct Verdict {
    Level level = Level::Zeroth;
    Conclusion conclusion = Conclusion::Inconclusive;
    std::string theorem;  // the obstruction invoked
    std::string witness;
    std::string label;    // solvability generalization, text only
    std::vector<std::string> assumptions;
};

struct Options {
    Rational precision{1, 1000000000000};
    int search_bound = 2;
    bool enumerate_metabolizers = false;
};

/// One Lagrangian with its representing metabolizers and its first-order signature.
struct LagrangianEntry {
    Submodule p;
    std::vector<Metabolizer> metabolizers;  // canonical order; front() is the chosen one
    std::optional<DerivativeLink> derivative;
    std::string derivative_note;
    SigExpr value;
    std::string route;
    Evaluation eval;
};

struct Analysis {
    KnotRef spec;
    SeifertMatrix v;
    AlexanderModule module;
    MetabolizerSearch metabolizers;
    std::vector<LagrangianEntry> lagrangians;
};

/// Builds the registry and context from a root spec.
EvalContext make_context(const KnotRef& spec, const Assumptions& assumptions, const Options& opts);

Analysis analyze(const KnotRef& spec, const EvalContext& ctx, const Options& opts);

Verdict zeroth_order_verdict(const KnotSpec& spec, const EvalContext& ctx);
Verdict first_order_verdict(const Analysis& a, const EvalContext& ctx);
/// Higher-level verdict carrying a zeroth-order obstruction unchanged.
Verdict inherited_verdict(const Verdict& zeroth, Level level);

struct SecondOrderBranch {
    std::size_t lagrangian = 0;  // index into Analysis::lagrangians
    bool certain = false;        // first-order entry certified zero (otherwise only possibly zero)
    std::vector<LinkSigEntry> set;
    std::string error;
};

struct SecondOrderSet {
    bool delta_unit = false;
    std::vector<SecondOrderBranch> branches;
    std::vector<SigExpr> members() const;
};

SecondOrderSet second_order_set(const Analysis& a, const EvalContext& ctx);
Verdict second_order_verdict(const Analysis& a, const SecondOrderSet& s, const EvalContext& ctx);

struct CooperRow {
    enum class Status { Satisfied, Violated, Undetermined };
    std::string lagrangian;
    std::string derivative;
    int components = 1;
    std::optional<int> nullity;
    SigExpr value;
    Evaluation eval;
    Status status = Status::Undetermined;
    std::string note;

    std::optional<int> bound() const;
};

const char* cooper_status_name(CooperRow::Status s);
std::vector<CooperRow> cooper_check(const Analysis& a, const EvalContext& ctx);
CooperRow::Status cooper_status(const Evaluation& e, int bound);

enum class Format { Text, Json };
std::string report(const KnotRef& spec, const Assumptions& assumptions, const Options& opts, Format format);

}  // namespace slicekit
