#include "kd/convolution.hpp"

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw StructuralError(what); }

void require_side(Side got, Side want, const char* what)
{
    if (got != want)
        fail(std::string(what) + " must be a " + side_name(want) + " one, got " + side_name(got));
}

void require_shape(const GMap& f, const SpaceP& src, const SpaceP& tgt, const char* what)
{
    if (!same_shape(*f.src(), *src) || !same_shape(*f.tgt(), *tgt))
        fail(std::string(what) + " has the wrong source or target");
}

std::string witness(const std::optional<int>& n) { return n ? " (degree " + std::to_string(*n) + ")" : ""; }

}  // namespace

Complex convolution_complex(const DGCoalgebra& c, const DGAlgebra& a) { return hom_complex(c.cx, a.cx); }

GMap convolution_unit(const DGCoalgebra& c, const DGAlgebra& a)
{
    return compose(unit_map(a), counit_map(c));
}

GMap hom_boundary(const GMap& f, const Complex& x, const Complex& y)
{
    return compose(y.d, f) - scaled(compose(f, x.d), parity_sign(f.field(), f.deg()));
}

GMap cup(const GMap& xi, const GMap& zeta, const DGComodule& x, const DGModule& m)
{
    require_side(x.side, Side::left, "comodule of a cup product");
    require_side(m.side, Side::left, "module of a cup product");
    GMap mid = tensor_map(xi, zeta, x.coact.tgt(), m.act.src());
    return compose(m.act, compose(mid, x.coact));
}

GMap cup(const GMap& xi, const GMap& zeta, const DGCoalgebra& c, const DGAlgebra& a)
{
    GMap mid = tensor_map(xi, zeta, c.cop.tgt(), a.mul.src());
    return compose(a.mul, compose(mid, c.cop));
}

GMap opp_cup(const GMap& xi, const GMap& zeta, const DGComodule& y, const DGModule& n)
{
    require_side(y.side, Side::right, "comodule of an opposite cup product");
    require_side(n.side, Side::right, "module of an opposite cup product");
    GMap mid = tensor_map(zeta, xi, y.coact.tgt(), n.act.src());
    return scaled(compose(n.act, compose(mid, y.coact)), koszul_sign(xi.field(), xi.deg(), zeta.deg()));
}

GMap opp_cup(const GMap& xi, const GMap& zeta, const DGCoalgebra& c, const DGAlgebra& a)
{
    GMap mid = tensor_map(zeta, xi, c.cop.tgt(), a.mul.src());
    return scaled(compose(a.mul, compose(mid, c.cop)), koszul_sign(xi.field(), xi.deg(), zeta.deg()));
}

GMap cap_action(const GMap& xi, const DGComodule& y, const DGModule& m, const SpaceP& ym_in)
{
    require_side(y.side, Side::right, "comodule of a cap product");
    require_side(m.side, Side::left, "module of a cap product");
    SpaceP ym = ym_in ? ym_in : tensor_space(y.space(), m.space());
    GMap split = tensor_map(y.coact, identity_map(m.space()), ym);
    GMap as = assoc(split.tgt());
    SpaceP y_am = tensor_space(y.space(), m.act.src());
    GMap inner = tensor_map(xi, identity_map(m.space()), as.tgt()->right(), m.act.src());
    GMap apply = tensor_map(identity_map(y.space()), inner, as.tgt(), y_am);
    GMap act = tensor_map(identity_map(y.space()), m.act, y_am, ym);
    return compose(act, compose(apply, compose(as, split)));
}

GMap opp_cap_action(const GMap& xi, const DGModule& n, const DGComodule& x, const SpaceP& nx_in)
{
    require_side(n.side, Side::right, "module of an opposite cap product");
    require_side(x.side, Side::left, "comodule of an opposite cap product");
    SpaceP nx = nx_in ? nx_in : tensor_space(n.space(), x.space());
    GMap split = tensor_map(identity_map(n.space()), x.coact, nx);
    SpaceP ax = tensor_space(n.alg->space(), x.space());
    GMap inner = tensor_map(xi, identity_map(x.space()), split.tgt()->right(), ax);
    GMap apply = tensor_map(identity_map(n.space()), inner, split.tgt(), tensor_space(n.space(), ax));
    GMap ai = assoc_inv(apply.tgt());
    GMap act = tensor_map(n.act, identity_map(x.space()), ai.tgt(), nx);
    return compose(act, compose(ai, compose(apply, split)));
}

AlgebraP convolution_algebra(const CoalgebraP& c, const AlgebraP& a, bool opposite)
{
    Complex hx = convolution_complex(*c, *a);
    const SpaceP& h = hx.space;
    if (!h->window().below || !h->window().above)
        fail("convolution algebra is materialized only for finite windows");
    const Field& f = h->field();
    SpaceP hh = tensor_space(h, h);
    std::map<std::pair<int, int>, GMap> elems;
    auto elem = [&](int p, int i) -> const GMap& {
        auto key = std::make_pair(p, i);
        auto it = elems.find(key);
        if (it == elems.end())
            it = elems.emplace(key, hom_map(c->space(), a->space(), p, SVec::unit(i, f.one()))).first;
        return it->second;
    };
    GMap mul(hh, h, 0);
    for (int n : mul.domain()) {
        if (!hh->dim(n))
            continue;
        Mat m(h->dim(n), hh->dim(n));
        for (const auto& blk : hh->blocks(n))
            for (int i = 0; i < blk.left_dim; ++i)
                for (int j = 0; j < blk.right_dim; ++j) {
                    const GMap& xi = elem(blk.left_deg, i);
                    const GMap& zeta = elem(n - blk.left_deg, j);
                    GMap prod = opposite ? opp_cup(xi, zeta, *c, *a) : cup(xi, zeta, *c, *a);
                    m.set_col(blk.offset + i * blk.right_dim + j, hom_element(c->space(), a->space(), prod, n));
                }
        mul.set(n, std::move(m));
    }
    SVec u = hom_element(c->space(), a->space(), convolution_unit(*c, *a), 0);
    if (u.size() != 1 || u.begin()->second != f.one())
        fail("convolution unit is not a basis vector");
    DGAlgebra xi;
    xi.cx = hx;
    xi.mul = std::move(mul);
    xi.unit = u.begin()->first;
    xi.augmented = false;
    return make_algebra(std::move(xi));
}

std::optional<int> comodule_map_defect(const GMap& f, const DGComodule& x, const DGComodule& y)
{
    if (x.side != y.side)
        fail("comodule map between comodules of different sides");
    GMap idc = identity_map(x.coalg->space());
    GMap lhs = compose(y.coact, f);
    GMap mid = x.side == Side::left ? tensor_map(idc, f, x.coact.tgt(), y.coact.tgt())
                                    : tensor_map(f, idc, x.coact.tgt(), y.coact.tgt());
    return first_difference(lhs, compose(mid, x.coact));
}

std::optional<int> module_map_defect(const GMap& f, const DGModule& m, const DGModule& n)
{
    if (m.side != n.side)
        fail("module map between modules of different sides");
    GMap ida = identity_map(m.alg->space());
    GMap lhs = compose(f, m.act);
    GMap mid = m.side == Side::left ? tensor_map(ida, f, m.act.src(), n.act.src())
                                    : tensor_map(f, ida, m.act.src(), n.act.src());
    return first_difference(lhs, compose(n.act, mid));
}

GMap omega_ca(const GMap& vartheta, const DGComodule& x, const DGModule& m)
{
    require_side(x.side, Side::left, "comodule");
    require_side(m.side, Side::left, "module");
    auto cm = cofree_comodule(x.coalg, m.cx, Side::left);
    require_shape(vartheta, x.space(), cm->space(), "comodule map X -> C|M");
    GMap v = restrict_map(vartheta, x.space(), cm->space());
    if (auto n = comodule_map_defect(v, x, *cm))
        fail("input is not a comodule map" + witness(n));
    auto ax = free_module(m.alg, x.cx, Side::left);
    const SpaceP& a = m.alg->space();
    SpaceP km = tensor_space(ground_space(m.field()), m.space());
    GMap collapse = compose(unit_left(km), tensor_map(counit_map(*x.coalg), identity_map(m.space()), cm->space(), km));
    GMap step = tensor_map(identity_map(a), v, ax->space(), tensor_space(a, cm->space()));
    GMap down = tensor_map(identity_map(a), collapse, step.tgt(), m.act.src());
    return compose(m.act, compose(down, step));
}

GMap omega_ac(const GMap& theta, const DGComodule& x, const DGModule& m)
{
    require_side(x.side, Side::left, "comodule");
    require_side(m.side, Side::left, "module");
    auto ax = free_module(m.alg, x.cx, Side::left);
    require_shape(theta, ax->space(), m.space(), "module map A|X -> M");
    GMap t = restrict_map(theta, ax->space(), m.space());
    if (auto n = module_map_defect(t, *ax, m))
        fail("input is not a module map" + witness(n));
    auto cm = cofree_comodule(x.coalg, m.cx, Side::left);
    const SpaceP& c = x.coalg->space();
    SpaceP kx = tensor_space(ground_space(m.field()), x.space());
    GMap insert = compose(tensor_map(unit_map(*m.alg), identity_map(x.space()), kx, ax->space()), unit_left_inv(x.space()));
    GMap up = tensor_map(identity_map(c), insert, x.coact.tgt(), tensor_space(c, ax->space()));
    GMap apply = tensor_map(identity_map(c), t, up.tgt(), cm->space());
    return compose(apply, compose(up, x.coact));
}

GMap omega_ca_right(const GMap& vartheta, const DGComodule& y, const DGModule& n)
{
    require_side(y.side, Side::right, "comodule");
    require_side(n.side, Side::right, "module");
    auto nc = cofree_comodule(y.coalg, n.cx, Side::right);
    require_shape(vartheta, y.space(), nc->space(), "comodule map Y -> N|C");
    GMap v = restrict_map(vartheta, y.space(), nc->space());
    if (auto d = comodule_map_defect(v, y, *nc))
        fail("input is not a comodule map" + witness(d));
    auto ya = free_module(n.alg, y.cx, Side::right);
    const SpaceP& a = n.alg->space();
    SpaceP nk = tensor_space(n.space(), ground_space(n.field()));
    GMap collapse = compose(unit_right(nk), tensor_map(identity_map(n.space()), counit_map(*y.coalg), nc->space(), nk));
    GMap step = tensor_map(v, identity_map(a), ya->space(), tensor_space(nc->space(), a));
    GMap down = tensor_map(collapse, identity_map(a), step.tgt(), n.act.src());
    return compose(n.act, compose(down, step));
}

GMap omega_ac_right(const GMap& theta, const DGComodule& y, const DGModule& n)
{
    require_side(y.side, Side::right, "comodule");
    require_side(n.side, Side::right, "module");
    auto ya = free_module(n.alg, y.cx, Side::right);
    require_shape(theta, ya->space(), n.space(), "module map Y|A -> N");
    GMap t = restrict_map(theta, ya->space(), n.space());
    if (auto d = module_map_defect(t, *ya, n))
        fail("input is not a module map" + witness(d));
    auto nc = cofree_comodule(y.coalg, n.cx, Side::right);
    const SpaceP& c = y.coalg->space();
    SpaceP yk = tensor_space(y.space(), ground_space(n.field()));
    GMap insert = compose(tensor_map(identity_map(y.space()), unit_map(*n.alg), yk, ya->space()), unit_right_inv(y.space()));
    GMap up = tensor_map(insert, identity_map(c), y.coact.tgt(), tensor_space(ya->space(), c));
    GMap apply = tensor_map(t, identity_map(c), up.tgt(), nc->space());
    return compose(apply, compose(up, y.coact));
}

}  // namespace kd
