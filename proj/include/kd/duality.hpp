#pragma once

#include "kd/twisting.hpp"

namespace kd {

// Dual bases keep the original order, so every pairing matrix is the identity.

// C*: product (psi)* varpi, unit eps
AlgebraP dual_algebra(const CoalgebraP& c);
// A*: coproduct varpi^-1 (phi)*, counit (eta)*; A must vanish on one side
CoalgebraP dual_coalgebra(const AlgebraP& a);
// X* for a comodule over C, as a module on the same side over C* = cstar
ModuleP dual_module(const DGComodule& x, const AlgebraP& cstar);
// M* for a module over A, as a comodule on the same side over A* = astar
ComoduleP dual_comodule(const DGModule& m, const CoalgebraP& astar);

// inverse of varpi: (U|V)* -> U*|V*; throws where varpi is not bijective
GMap varpi_inverse(const SpaceP& u, const SpaceP& v);
// U -> U**, u -> (a -> (-1)^{|a||u|} a(u))
GMap evaluation(const SpaceP& u);
// U** -> U
GMap evaluation_inverse(const SpaceP& uss, const SpaceP& u);

// a|xi -> (c -> xi(c) a), from A|C* (or its opposite) into the convolution algebra
struct Sigma {
    AlgebraP src;  // A|C*, or A^o|C*^o
    AlgebraP tgt;  // Hom(C,A) under cup products, or their opposites
    GMap map;
    bool injective = false;
    bool bijective = false;
    bool hypotheses = false;  // finiteness conditions that force bijectivity
};
Sigma sigma(const AlgebraP& a, const CoalgebraP& c, bool opposite = false);
// id on Y|M is equivariant: sigma(a|xi) acting by cap equals (-1)^{|a|(|xi|+|y|)} (xi cap y)|am
std::optional<int> sigma_defect(const Sigma& s, const DGComodule& y, const DGModule& m);
// id on N|X: opposite cap equals (-1)^{(|a|+|xi|)|n|} na|(xi cap x)
std::optional<int> sigma_opp_defect(const Sigma& s, const DGModule& n, const DGComodule& x);

// delta: Hom(C,A) -> Hom(A*,C*), f -> f*, as a map of convolution algebras
struct Delta {
    AlgebraP src, tgt;
    GMap map;
};
Delta delta_algebra(const CoalgebraP& c, const AlgebraP& a);

// tau*: A* -> C*
TwistingMap dual_twisting(const TwistingMap& t);

struct PairingMorphism {
    GMap map;
    Complex src, tgt;
    bool injective = false;
    bool bijective = false;
};
// N* x|tau* X* -> (N |x tau X)*; tstar must be dual_twisting(t)
PairingMorphism varpi_tau(const DGModule& n, const DGComodule& x, const TwistingMap& t, const TwistingMap& tstar);
// Y* |x tau* M* -> (Y x| tau M)*
PairingMorphism varpi_tau(const DGComodule& y, const DGModule& m, const TwistingMap& t, const TwistingMap& tstar);

struct MooreValue {
    std::string name;
    std::map<int, int> ranks, expected;
    std::vector<int> checked;
    bool ok = false;
};
struct MooreReport {
    std::vector<MooreValue> values;
    bool ok = false;
};
// A |x k ~ A, A |x C** ~ k, C* |x k ~ C*, C* |x A* ~ k on degrees |n| <= cutoff - 1
MooreReport moore_value_checks(const TwistingMap& t, int cutoff);

struct MooreUnit {
    Complex src;  // A |x (C* |x M*)*
    GMap map;     // to M
    QuasiIsoVerdict verdict;
    std::vector<int> checked;
    bool ok = false;
};
// the composite through ((varpi_tau)*)^-1 and eps^ACM
MooreUnit moore_unit_check(const TwistingMap& t, const ModuleP& m, int cutoff);

struct ExtTable {
    std::map<int, int> ranks;  // H((C x| M)*) on certified degrees
    int checked_lo = 0, checked_hi = -1;
    std::optional<bool> matches_dual_coalgebra;  // set when M is k
};
// ranks of Ext_A(M,k); refuses unless tau is certified acyclic up to the cutoff
ExtTable ext_ranks(const TwistingMap& t, const ModuleP& m, int cutoff);

}  // namespace kd
