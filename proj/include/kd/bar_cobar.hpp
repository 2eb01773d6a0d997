#pragma once

#include "kd/twisting.hpp"

namespace kd {

// B(A): the tensor coalgebra on the suspended augmentation ideal, words [a1|...|ap]
// in degree sum(|a_i| + 1), with the universal twisting map [a] -> a.
struct BarConstruction {
    AlgebraP source;
    CoalgebraP coalg;
    TwistingMap tau;
    int cutoff = 0;
    std::vector<std::pair<int, int>> letter_src;  // letter -> (degree in A, basis index)
    std::map<std::pair<int, int>, int> letter_of;
};

// Omega(C): the tensor algebra on the desuspended coaugmentation coideal, with
// the universal twisting map c -> [c - eta eps c].
struct CobarConstruction {
    CoalgebraP source;
    AlgebraP alg;
    TwistingMap tau;
    int cutoff = 0;
    std::vector<std::pair<int, int>> letter_src;  // letter -> (degree in C, basis index)
    std::map<std::pair<int, int>, int> letter_of;
};

BarConstruction bar(const AlgebraP& a, int cutoff);
CobarConstruction cobar(const CoalgebraP& c, int cutoff);

// the coalgebra morphism C -> B(A) through which tau factors; C must be cocomplete
GMap gamma_tau(const TwistingMap& t, const BarConstruction& b);
// the algebra morphism Omega(C) -> A through which tau factors
GMap alpha_tau(const TwistingMap& t, const CobarConstruction& w);

struct ComparisonMorphism {
    GMap map;
    Complex src, tgt;
    QuasiIsoVerdict verdict;
    bool hypotheses = true;  // false: the verdict is reported but certifies nothing
};
// Omega(B(A)) -> A
ComparisonMorphism bar_cobar_counit(const BarConstruction& b, const CobarConstruction& ob);
// C -> B(Omega(C))
ComparisonMorphism cobar_bar_unit(const CobarConstruction& w, const BarConstruction& bw);

// B(alpha): B(A') -> B(A) and Omega(gamma): Omega(C) -> Omega(C')
ComparisonMorphism bar_functor(const GMap& alpha, const BarConstruction& src, const BarConstruction& tgt);
ComparisonMorphism cobar_functor(const GMap& gamma, const CobarConstruction& src, const CobarConstruction& tgt);
// the hypotheses under which Omega preserves quasi-isomorphisms
bool cobar_quasi_iso_hypotheses(const DGCoalgebra& c, const DGCoalgebra& d);

}  // namespace kd
