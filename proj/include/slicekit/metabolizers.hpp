#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slicekit/modules.hpp"
#include "slicekit/spec.hpp"

namespace slicekit {

/// g primitive integer vectors spanning an isotropic summand of H_1(Sigma).
struct Metabolizer {
    std::vector<IntVector> basis;

    int rank() const { return static_cast<int>(basis.size()); }
    bool operator==(const Metabolizer& o) const { return basis == o.basis; }
    bool operator<(const Metabolizer& o) const { return basis < o.basis; }
    std::string to_string() const;
};

struct MetabolizerSearch {
    std::vector<Metabolizer> metabolizers;
    bool complete = true;
    std::string method;
};

/// First nonzero entry positive, then divided by the content.
IntVector primitive_form(IntVector v);
bool is_summand(const std::vector<IntVector>& vectors, std::size_t ambient);
bool is_metabolizer(const SeifertMatrix& v, const Metabolizer& m);

/// Exact solution of x^T V x = 0 at genus one; throws WrongGenus otherwise.
std::vector<Metabolizer> genus1_metabolizers(const SeifertMatrix& v);

/// Blockwise composition for coprime genus-one blocks, definiteness, or bounded enumeration.
MetabolizerSearch higher_genus_metabolizers(const SeifertMatrix& v, int search_bound);
/// Dispatches on genus; genus one is always complete.
MetabolizerSearch find_metabolizers(const SeifertMatrix& v, int search_bound);

Submodule metabolizer_to_lagrangian(const AlexanderModule& a, const Metabolizer& m);
Submodule metabolizer_to_lagrangian(const SeifertMatrix& v, const Metabolizer& m);

struct DerivativeLink {
    Metabolizer metabolizer;
    LinkSpec link;  // f holds the image of each meridian in A_0/P coordinates
    int rank = 0;   // d = deg(Delta) / 2

    std::size_t size() const { return link.size(); }
    bool f_is_zero() const { return link.f_is_zero(); }
};

/// Coordinates of x in A/P (entries off the pivot columns of P's echelon basis).
QVector quotient_coordinates(const Submodule& p, const QVector& x);

/// Catalogue lookup; throws NotRepresentable for non-catalogued pairs.
DerivativeLink derivative(const KnotSpec& spec, const Metabolizer& m);

/// Explicit-band spec whose a-band derivative is the given link.
/// f_rank < 0 means no companion map was supplied.
KnotRef antiderivative(const std::vector<KnotRef>& j, const SeifertMatrix& target, int f_rank = -1,
                       const std::string& name = "antiderivative");
/// The a-band metabolizer (a_1, ..., a_g) of the standard basis.
Metabolizer a_band_metabolizer(int genus);

}  // namespace slicekit
