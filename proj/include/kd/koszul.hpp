#pragma once

#include "kd/bar_cobar.hpp"
#include "kd/duality.hpp"

namespace kd {

struct TwoHomogeneity {
    bool ok = true;
    std::optional<int> failure;  // first degree where V^2 meets A-bar^3 or misses A-bar^2
    int checked_lo = 0, checked_hi = -1;
};

// A graded, augmented, polarity p or n. V is spanned by the basis vectors of
// A-bar that are not in A-bar^2 modulo the earlier ones (first echelon pivots).
struct QuadraticData {
    AlgebraP a;
    std::vector<std::pair<int, int>> v;  // (degree, basis index in A)
    TwoHomogeneity two_homogeneous;
    // phi in each degree m of A-bar^2: columns sv|sv' for |v|+|v'| = m, rows A_m modulo A-bar^3
    std::map<int, Mat> phi;
    std::map<int, std::vector<std::pair<int, int>>> phi_columns;  // column -> (v index, v' index)
    Presentation shriek_presentation;
    AlgebraP shriek;  // A^!
    std::map<int, int> shriek_ranks;
    int cutoff = 0;
};

TwoHomogeneity two_homogeneous_check(const DGAlgebra& a);
// refuses (StructuralError) unless A is two-homogeneous
QuadraticData quadratic_dual(const AlgebraP& a, int cutoff);

struct PriddyData {
    QuadraticData quad;
    CoalgebraP coalg;      // A^< = (A^!)*, zero differential
    BarConstruction bar;   // B(A) with the same cutoff
    GMap inclusion;        // A^< -> B(A)
    TwistingMap tau;       // tau^p = tau^A restricted along the inclusion
};
PriddyData priddy(const AlgebraP& a, int cutoff);

struct KoszulCertificate {
    int cutoff = 0;
    TwoHomogeneity two_homogeneous;
    std::map<int, int> shriek_ranks;
    AcyclicCertificate acyclic;
    std::map<int, int> bar_ranks;     // H(B(A))
    std::map<int, int> priddy_ranks;  // A^<
    std::optional<int> rank_failure;  // first degree with differing ranks
    bool koszul = false;
    std::optional<int> first_failure;
    std::string convention = "A^! = T(W*)/(Im phi*), W*|W* identified with (W|W)* by varpi";
};
KoszulCertificate koszul_check(const AlgebraP& a, int cutoff);

// d = sum v_i | xi_i in A|(A^<)*, xi_i dual to sv_i, and K^A = A|A^< with
// differential (a|z) -> (a|z) d
struct KoszulConstruction {
    PriddyData priddy;
    AlgebraP ring;  // A|(A^<)*
    SVec d;         // in ring degree -1
    bool d_squared_zero = false;
    ModuleP module;  // K^A
};
KoszulConstruction koszul_construction(const AlgebraP& a, int cutoff);

}  // namespace kd
