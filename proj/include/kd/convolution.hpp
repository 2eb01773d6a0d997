#pragma once

#include "kd/dg_coalgebra.hpp"

namespace kd {

// Elements of the convolution algebra Hom(C,A) are graded maps C -> A; products
// are computed on demand and the algebra is only materialized for finite windows.
Complex convolution_complex(const DGCoalgebra& c, const DGAlgebra& a);
GMap convolution_unit(const DGCoalgebra& c, const DGAlgebra& a);  // eta^A eps^C
// Hom differential d f - (-1)^|f| f d
GMap hom_boundary(const GMap& f, const Complex& x, const Complex& y);

// (xi cup zeta)(x) = sum (-1)^{|zeta||c_i|} xi(c_i) zeta(x_i); X left comodule, M left module
GMap cup(const GMap& xi, const GMap& zeta, const DGComodule& x, const DGModule& m);
// the product of the convolution algebra
GMap cup(const GMap& xi, const GMap& zeta, const DGCoalgebra& c, const DGAlgebra& a);
// (-1)^{|zeta||xi|} phi (zeta|xi) psi; Y right comodule, N right module, zeta: Y -> N
GMap opp_cup(const GMap& xi, const GMap& zeta, const DGComodule& y, const DGModule& n);
GMap opp_cup(const GMap& xi, const GMap& zeta, const DGCoalgebra& c, const DGAlgebra& a);

// xi acting on Y|M: y|m -> sum (-1)^{|xi||y_i|} y_i | xi(c_i) m
GMap cap_action(const GMap& xi, const DGComodule& y, const DGModule& m, const SpaceP& ym = nullptr);
// xi acting on N|X: n|x -> sum (-1)^{|xi||n|} n xi(c_i) | x_i
GMap opp_cap_action(const GMap& xi, const DGModule& n, const DGComodule& x, const SpaceP& nx = nullptr);

// Hom(C,A) as a DG algebra under cup products (or their opposites); windows must be finite
AlgebraP convolution_algebra(const CoalgebraP& c, const AlgebraP& a, bool opposite = false);

// Equivariance tests for maps of any degree, with witness degree on failure.
std::optional<int> comodule_map_defect(const GMap& f, const DGComodule& x, const DGComodule& y);
std::optional<int> module_map_defect(const GMap& f, const DGModule& m, const DGModule& n);

// The adjunction isomorphisms. Left-sided: vartheta: X -> C|M a left comodule map,
// theta: A|X -> M a left module map. Right-sided: vartheta: Y -> N|C, theta: Y|A -> N.
GMap omega_ca(const GMap& vartheta, const DGComodule& x, const DGModule& m);
GMap omega_ac(const GMap& theta, const DGComodule& x, const DGModule& m);
GMap omega_ca_right(const GMap& vartheta, const DGComodule& y, const DGModule& n);
GMap omega_ac_right(const GMap& theta, const DGComodule& y, const DGModule& n);

}  // namespace kd
