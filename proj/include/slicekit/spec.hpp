#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slicekit/matrix.hpp"
#include "slicekit/seifert.hpp"

namespace slicekit {

struct KnotSpec;
using KnotRef = std::shared_ptr<const KnotSpec>;

struct Fact {
    std::string statement;
    std::string provenance;
};

enum class Family { Symbolic, Unknot, Twist, Torus, GenusOne, GenusTwoFig9, ConnectedSum, Explicit };

const char* family_name(Family f);

/// Infection curve: class in generator or surface coordinates, or deeper in the derived series.
struct InfectionSite {
    enum class Kind { Generator, Surface, Deeper };
    Kind kind = Kind::Generator;
    IntVector eta;
    KnotRef knot;
};

/// Declared value of the base knot's first-order term at a submodule.
/// submodule: "0", "lagrangians", "*", or an order polynomial.
struct BaseTerm {
    std::string submodule;
    std::string expr;
    std::string provenance;
};

/// Band of an explicit surface: a surface class whose core has the given knot type.
struct Band {
    IntVector curve;
    KnotRef core;
};

/// Derivative supplied as data (nullity and rho0^f are not computed from geometry).
struct DeclaredDerivative {
    std::string name;
    std::string tag;
    int components = 1;
    std::optional<int> nullity;
    std::string rho0f;
    std::string provenance;
};

struct KnotSpec {
    std::string name;
    Family family = Family::Symbolic;
    long tw = 0, p = 0, q = 0, l = 0, l1 = 0, l2 = 0;
    std::vector<KnotRef> summands;
    std::optional<IntMatrix> matrix;  // explicit family, as given
    std::map<std::string, KnotRef> cores;
    std::string string_link;
    // fig9: meridian coefficients of the B curve in J_ij, keyed "11", "12", "21", "22"
    std::map<std::string, IntVector> b_curve;
    std::vector<Band> bands;
    std::vector<InfectionSite> sites;
    std::vector<BaseTerm> base_terms;
    std::vector<DeclaredDerivative> declared_derivatives;
    std::vector<Fact> facts;

    bool has_fact(const std::string& statement) const;
    /// True when the family determines a Seifert matrix.
    bool concrete() const { return family != Family::Symbolic; }
};

/// Meridian coefficients of an infection curve in a link's complement.
struct LinkSite {
    IntVector image;
    KnotRef knot;
};

/// Link of knots; components carry knot types, tag names the structural class.
/// tag: knot | split | boundary | infected_trivial | figure12 | trivial_milnor | declared | generic
struct LinkSpec {
    std::string name;
    std::string tag = "generic";
    std::vector<KnotRef> components;
    std::vector<LinkSite> sites;
    std::vector<QVector> f;  // image of each meridian; empty means abelianization
    std::optional<int> declared_nullity;

    std::size_t size() const { return components.size(); }
    QVector meridian_image(std::size_t k) const;
    QVector site_image(const LinkSite& s) const;
    bool f_is_zero() const;
};

SeifertMatrix seifert_of(const KnotSpec& spec);
KnotRef make_symbolic(const std::string& name);
KnotRef make_unknot(const std::string& name = "U");
KnotRef make_torus(long p, long q);

std::string torus_name(long p, long q);

struct Document {
    KnotRef knot;
    std::optional<LinkSpec> link;
};

/// Parses a JSON document: a knot spec, or a link spec when "components" is present.
Document parse_document(const std::string& text);
KnotRef parse_knot(const std::string& text);
std::string knot_to_json(const KnotSpec& spec, int indent = 2);
std::string link_to_json(const LinkSpec& link, int indent = 2);

/// All named specs reachable from a root, inline definitions preferred over bare references.
class KnotRegistry {
   public:
    void add(const KnotRef& spec);
    void add(const LinkSpec& link);
    KnotRef find(const std::string& name) const;
    const std::map<std::string, KnotRef>& all() const { return specs_; }

   private:
    std::map<std::string, KnotRef> specs_;
};

}  // namespace slicekit
