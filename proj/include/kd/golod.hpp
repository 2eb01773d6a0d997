#pragma once

#include "kd/bar_cobar.hpp"
#include "kd/duality.hpp"

namespace kd {

// hp: reduced homology vanishes in degrees <= 0; hn: in degrees >= -1
enum class HomologyPolarity { hp, hn };
std::string homology_polarity_name(HomologyPolarity h);

struct MasseyClass {
    int degree = 0;
    SVec rep;  // a cycle of B
    std::string label;
};

struct MasseyObstruction {
    std::vector<int> tuple;
    int degree = 0;  // degree of the right-hand side
    SVec rhs;        // a cycle that is not a boundary
    SVec cls;        // its coordinates in the homology basis of that degree
};

struct MasseyStep {
    std::vector<int> tuple;
    bool ok = true;
};

// o on tuples of basis classes h of reduced H(B), for tuples whose suspended
// word has |degree| <= cutoff
struct MasseyOperation {
    AlgebraP b;
    int cutoff = 0;
    HomologyPolarity polarity = HomologyPolarity::hp;
    std::vector<MasseyClass> classes;
    std::map<std::vector<int>, SVec> values;
    std::vector<MasseyStep> log;  // construction order
    std::optional<MasseyObstruction> obstruction;

    bool complete() const { return !obstruction; }
    // |h1| + ... + |hp| + p - 1
    int degree(const std::vector<int>& tuple) const;
};

// Builds o greedily, degree by degree; refuses (StructuralError) unless the
// homology polarity holds on the known degrees.
MasseyOperation massey_build(const AlgebraP& b, int cutoff);
// first stored tuple violating the cycle, class, product or degree conditions
std::optional<std::vector<int>> massey_defect(const MasseyOperation& o);

// T^c(W) with letters w_h of degree |h| + 1
CoalgebraP massey_coalgebra(const MasseyOperation& o);
// tau^o(w1|...|wp) = o(h1,...,hp), tau^o(1) = 0; unchecked
GMap massey_map(const MasseyOperation& o, const CoalgebraP& tc);
// throws unless tau^o is a twisting map
TwistingMap tau_from_massey(const MasseyOperation& o);

struct ProductTriviality {
    bool trivial = true;
    std::optional<std::pair<int, int>> witness;  // class indices with a nonzero product
};
ProductTriviality product_triviality_check(const MasseyOperation& o);
// the same check for B, with classes chosen as massey_build would
ProductTriviality product_triviality_check(const AlgebraP& b, int cutoff);

enum class GolodVerdict { golod, not_golod, inconclusive };
std::string golod_verdict_name(GolodVerdict v);

struct GolodCertificate {
    int cutoff = 0;
    HomologyPolarity polarity = HomologyPolarity::hp;
    ProductTriviality products;
    MasseyOperation massey;
    std::optional<AcyclicCertificate> acyclic;  // of tau^o, when o is complete
    std::map<int, int> ext_ranks;               // Ext_B(k,k) on certified degrees
    std::map<int, int> free_ranks;              // T(W*), from 1/(1 - sum t^{|w*|})
    std::optional<int> ext_mismatch;
    GolodVerdict verdict = GolodVerdict::inconclusive;
};
GolodCertificate golod_check(const AlgebraP& b, int cutoff);

// k |x V with V.V = 0; V must be finite and lie on one side of degree 0
AlgebraP trivial_extension(const SpaceP& v);

}  // namespace kd
