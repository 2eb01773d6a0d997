#pragma once

#include "kd/convolution.hpp"

namespace kd {

// A degree -1 map tau: C -> A with d tau + tau d = phi (tau|tau) psi and eps tau = 0 = tau eta.
struct TwistingMap {
    CoalgebraP c;
    AlgebraP a;
    GMap map;
};

struct TwistingVerdict {
    bool ok = true;
    std::optional<int> degree;  // source degree of the first failure
    std::string reason;
};

TwistingVerdict is_twisting(const DGCoalgebra& c, const DGAlgebra& a, const GMap& tau);
// throws with the failing degree
TwistingMap make_twisting(const CoalgebraP& c, const AlgebraP& a, GMap tau);
TwistingMap zero_twisting(const CoalgebraP& c, const AlgebraP& a);

// N right A-module, X left C-comodule: d + opp_cap(tau) on N|X
Complex twist_left(const DGModule& n, const DGComodule& x, const TwistingMap& t);
// Y right C-comodule, M left A-module: d - cap(tau) on Y|M
Complex twist_right(const DGComodule& y, const DGModule& m, const TwistingMap& t);

// A |x_tau X as a left A-module, N |x_tau C as a right C-comodule,
// C x|_tau M as a left C-comodule, Y x|_tau A as a right A-module
ModuleP twisted_free_left(const TwistingMap& t, const DGComodule& x);
ComoduleP twisted_cofree_right(const TwistingMap& t, const DGModule& n);
ComoduleP twisted_cofree_left(const TwistingMap& t, const DGModule& m);
ModuleP twisted_free_right(const TwistingMap& t, const DGComodule& y);

// N |x C x| M on (N|C)|M, and Y x| A |x X on (Y|A)|X
Complex twist_triple(const DGModule& n, const TwistingMap& t, const DGModule& m);
Complex twist_triple(const DGComodule& y, const TwistingMap& t, const DGComodule& x);

// the three bracketings, all expressed on the left-nested space
struct Bracketings {
    Complex inner;   // N |x (C x| M), resp. Y x| (A |x X), conjugated by the associator
    Complex direct;  // the triple formula
    Complex outer;   // (N |x C) x| M, resp. (Y x| A) |x X
    bool agree() const;
};
Bracketings bracketings(const DGModule& n, const TwistingMap& t, const DGModule& m);
Bracketings bracketings(const DGComodule& y, const TwistingMap& t, const DGComodule& x);

// Units and counits of the twisted adjunctions; each is checked to be a chain map.
GMap eps_acm(const TwistingMap& t, const DGModule& m);     // A|x C x| M -> M
GMap eta_cax(const TwistingMap& t, const DGComodule& x);   // X -> C x| A |x X
GMap eps_nca(const TwistingMap& t, const DGModule& n);     // N |x C x| A -> N
GMap eta_yac(const TwistingMap& t, const DGComodule& y);   // Y -> Y x| A |x C

struct AcyclicCertificate {
    int cutoff = 0;
    std::string polarity;
    std::map<int, int> left_ranks;   // H(A |x C)
    std::map<int, int> right_ranks;  // H(C x| A)
    int checked_lo = 0, checked_hi = -1;
    bool acyclic = false;
    std::optional<int> witness;
};
// Homology of A |x C and C x| A on the certified degrees of |n| <= cutoff - 1.
// Refuses (StructuralError) unless A-bar and C-bar satisfy the polarity bounds;
// the two routes disagreeing is an internal error (std::logic_error).
AcyclicCertificate acyclic_check(const TwistingMap& t, int cutoff);

// gamma: C -> C' a coalgebra morphism and tau' on C': tau = tau' gamma, with
// gamma|A: C x|tau A -> C' x|tau' A and A|gamma: A |x tau C -> A |x tau' C'.
// alpha: A' -> A an algebra morphism and tau' into A': tau = alpha tau', with
// C|alpha: C x|tau' A' -> C x|tau A and alpha|C: A' |x tau' C -> A |x tau C.
struct Transport {
    TwistingMap tau;
    GMap right_map;  // between the C x| A complexes
    GMap left_map;   // between the A |x C complexes
    Complex right_src, right_tgt, left_src, left_tgt;
};
Transport transport_coalgebra(const GMap& gamma, const CoalgebraP& c, const TwistingMap& tp);
Transport transport_algebra(const GMap& alpha, const AlgebraP& a, const TwistingMap& tp);

struct Resolution {
    Complex complex;  // A |x C x| M
    GMap eps;         // to M
    QuasiIsoVerdict verdict;
};
Resolution natural_resolution(const TwistingMap& t, const ModuleP& m);

}  // namespace kd
