#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slicekit/metabolizers.hpp"
#include "slicekit/modules.hpp"
#include "slicekit/spec.hpp"

namespace slicekit {

/// rho1(name) is an opaque metabelian value; rho0(name) resolves through the knot registry.
struct Atom {
    enum class Kind { Rho1Sym, Rho0 };
    Kind kind = Kind::Rho0;
    std::string name;

    bool operator<(const Atom& o) const { return kind != o.kind ? kind < o.kind : name < o.name; }
    bool operator==(const Atom& o) const { return kind == o.kind && name == o.name; }
    std::string to_string() const;
};

/// Rational linear combination of atoms plus a constant; zero coefficients are never stored.
class SigExpr {
   public:
    SigExpr() = default;
    SigExpr(const Rational& c) : constant_(c) {}  // NOLINT(google-explicit-constructor)

    static SigExpr rho0(const std::string& knot);
    static SigExpr rho1(const std::string& name);
    static SigExpr atom(const Atom& a);
    static SigExpr parse(const std::string& text);

    const std::map<Atom, Rational>& terms() const { return terms_; }
    const Rational& constant() const { return constant_; }
    bool is_zero() const { return terms_.empty() && constant_ == 0; }
    bool is_constant() const { return terms_.empty(); }

    SigExpr& operator+=(const SigExpr& o);
    SigExpr& operator-=(const SigExpr& o);
    friend SigExpr operator+(SigExpr a, const SigExpr& b) { return a += b; }
    friend SigExpr operator-(SigExpr a, const SigExpr& b) { return a -= b; }
    friend SigExpr operator*(const Rational& c, const SigExpr& e);
    bool operator==(const SigExpr& o) const { return terms_ == o.terms_ && constant_ == o.constant_; }
    bool operator<(const SigExpr& o) const { return to_string() < o.to_string(); }

    /// rho1 atoms first, then rho0 atoms, each by name, then the constant.
    std::string to_string() const;

   private:
    std::map<Atom, Rational> terms_;
    Rational constant_ = 0;
};

/// Real interval with optional infinite and open ends.
struct Range {
    bool has_lo = true, has_hi = true;
    bool lo_open = false, hi_open = false;
    Rational lo = 0, hi = 0;

    static Range point(const Rational& q);
    static Range everything();
    Range operator+(const Range& o) const;
    Range scaled(const Rational& c) const;
    bool contains_zero() const;
    bool is_point_zero() const { return has_lo && has_hi && lo == 0 && hi == 0 && !lo_open && !hi_open; }
    std::string to_string() const;
};

struct Assumption {
    enum class Kind { Value, Interval, NonZero };
    Kind kind = Kind::Value;
    Range range;
    std::string text;
};

/// Atom name (as rendered, e.g. "rho0(L2)") to value, interval or sign.
class Assumptions {
   public:
    /// JSON object; values like "= 1/2", "> 0", ">= 0", "<= -1", "!= 0", "[a, b]", "(a, b]".
    static Assumptions parse(const std::string& json_text);
    void set(const std::string& atom, const std::string& constraint);
    const Assumption* find(const std::string& atom) const;
    const std::map<std::string, Assumption>& all() const { return by_atom_; }
    bool empty() const { return by_atom_.empty(); }

   private:
    std::map<std::string, Assumption> by_atom_;
};

struct Evaluation {
    Range range;
    bool certified_zero = false;
    bool certified_nonzero = false;
    SigExpr residual;                // atoms not pinned to an exact value
    std::vector<std::string> used;   // assumptions and facts consumed
    bool exact() const { return range.has_lo && range.has_hi && range.lo == range.hi && !range.lo_open; }
    std::string to_string() const;
};

/// Everything needed to turn atoms into numbers.
class EvalContext {
   public:
    EvalContext(KnotRegistry registry, Assumptions assumptions, Rational target_radius);

    const KnotRegistry& registry() const { return registry_; }
    const Assumptions& assumptions() const { return assumptions_; }
    const Rational& target_radius() const { return radius_; }
    KnotRef resolve(const KnotRef& k) const;
    /// Registers knots produced during the analysis (derivative components).
    void learn(const KnotRef& k) const;
    /// Certified rho0 of a concrete knot, cached by name.
    std::optional<CertifiedReal> rho0_of(const std::string& name) const;

   private:
    mutable KnotRegistry registry_;
    Assumptions assumptions_;
    Rational radius_;
    mutable std::map<std::string, CertifiedReal> cache_;
};

Evaluation evaluate(const SigExpr& e, const EvalContext& ctx);

/// Base term plus rho0 of every site whose class survives in A/P.
SigExpr first_order_sig(const KnotSpec& desc, const AlexanderModule& a, const Submodule& p);
SigExpr first_order_sig(const KnotSpec& desc, const Submodule& p);

struct FirstOrderEntry {
    Submodule p;
    bool lagrangian = false;
    SigExpr value;
};

std::vector<FirstOrderEntry> first_order_sig_set(const KnotSpec& desc);
/// Values of a knot's first-order set; symbolic knots give one opaque symbol.
std::vector<SigExpr> knot_first_order_values(const KnotRef& knot, const EvalContext& ctx);

struct LinkSigEntry {
    SigExpr value;
    std::string kernel;  // which coefficient system the entry comes from
};

/// Closed catalogue: figure12, split, boundary, infected_trivial, knot.
std::vector<LinkSigEntry> first_order_sigs_of_supported_link(const LinkSpec& link, const EvalContext& ctx);

/// Components are read as meridian infections of a trivial link.
SigExpr rho0_of_infected_trivial_link(const LinkSpec& link);

std::optional<int> nullity(const LinkSpec& link);

}  // namespace slicekit
