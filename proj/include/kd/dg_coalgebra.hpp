#pragma once

#include "kd/dg_algebra.hpp"

namespace kd {

// Basis is adapted: basis vector `unit` of degree 0 is the coaugmentation and
// the counit reads off its coordinate, so the other basis vectors span C-bar.
struct DGCoalgebra {
    Complex cx;
    GMap cop;  // C -> C|C
    int unit = 0;
    bool coaugmented = true;
    Polarity polarity = Polarity::none;
    WordBasisP words;  // set for tensor coalgebras

    const SpaceP& space() const { return cx.space; }
    const Field& field() const { return cx.field(); }
    SVec unit_vec() const { return SVec::unit(unit, field().one()); }
    bool is_unit(int n, int i) const { return n == 0 && i == unit; }
    Scalar counit(int n, const SVec& c) const { return n == 0 ? c.get(unit) : field().zero(); }
    SVec coproduct(int n, const SVec& c) const { return cop.apply(n, c); }
};
using CoalgebraP = std::shared_ptr<const DGCoalgebra>;

CoalgebraP make_coalgebra(DGCoalgebra c);
// throws StructuralError naming the failed law and a witness basis element
void check_coalgebra(const DGCoalgebra& c);
GMap counit_map(const DGCoalgebra& c);         // C -> k
GMap coaugmentation_map(const DGCoalgebra& c);  // k -> C

// left: coact is X -> C|X; right: Y -> Y|C
struct DGComodule {
    CoalgebraP coalg;
    Side side = Side::left;
    Complex cx;
    GMap coact;

    const SpaceP& space() const { return cx.space; }
    const Field& field() const { return cx.field(); }
};
using ComoduleP = std::shared_ptr<const DGComodule>;

ComoduleP make_comodule(DGComodule x);
void check_comodule(const DGComodule& x);
ComoduleP regular_comodule(const CoalgebraP& c, Side side);
// k through the coaugmentation
ComoduleP trivial_comodule(const CoalgebraP& c, Side side);
// C (x) V (left) or V (x) C (right)
ComoduleP cofree_comodule(const CoalgebraP& c, const Complex& v, Side side);

// C-bar: the basis without the coaugmentation, and the inclusion/projection
SpaceP reduced_space(const DGCoalgebra& c);
GMap reduced_inclusion(const DGCoalgebra& c, const SpaceP& cbar);
GMap reduced_projection(const DGCoalgebra& c, const SpaceP& cbar);
// psi-bar: C-bar -> C-bar|C-bar
GMap reduced_coproduct(const DGCoalgebra& c, const SpaceP& cbar);
// psi-bar^(p) = (psi-bar^(p-1) | 1) psi-bar, into the left-nested p-fold tensor power
GMap psi_iter(const DGCoalgebra& c, const SpaceP& cbar, int p);

struct CocompleteVerdict {
    bool cocomplete = true;
    int depth = 0;                      // largest iterate examined
    std::optional<int> witness_degree;  // a degree where no iterate vanishes
    bool by_polarity = false;
};
CocompleteVerdict cocomplete_check(const DGCoalgebra& c, int max_depth = 16);

// Tensor coalgebra on letters of nonzero degree; words of |degree| <= cutoff,
// labels [a|b|c], unit [].
CoalgebraP tensor_coalgebra(const Field& f, const std::vector<std::pair<std::string, int>>& letters, int cutoff);
CoalgebraP tensor_coalgebra(const SpaceP& v, int cutoff);
// Coderivation of T^c(V) whose projection to word length 1 is q; q is given as a
// map T^c(V) -> T^c(V) landing in length-one words.
GMap coderivation_extend(const DGCoalgebra& tc, const GMap& q);
// Coalgebra morphism into T^c(V) whose projection to length one is f: C -> T^c(V);
// component p is (f|...|f) psi-bar^(p) on C-bar.
GMap corestriction_lift(const DGCoalgebra& c, const DGCoalgebra& tc, const GMap& f);
// the subcoalgebra of degrees lo..hi of a coalgebra supported in degrees >= 0
CoalgebraP truncate_coalgebra(const CoalgebraP& c);
// throws unless g is a morphism of DG coalgebras
void check_coalgebra_morphism(const GMap& g, const DGCoalgebra& c, const DGCoalgebra& d);

}  // namespace kd
