#include "kd/twisting.hpp"

#include <stdexcept>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw StructuralError(what); }

GMap twisted(const GMap& d0, const GMap& lam, bool add)
{
    return add ? d0 + lam : d0 - lam;
}

// U|C -> U via the counit, U|k collapsed
GMap collapse_right(const SpaceP& u, const DGCoalgebra& c, const SpaceP& uc)
{
    SpaceP uk = tensor_space(u, ground_space(c.field()));
    return compose(unit_right(uk), tensor_map(identity_map(u), counit_map(c), uc, uk));
}

// U -> U|A via the unit
GMap insert_right(const SpaceP& u, const DGAlgebra& a, const SpaceP& ua)
{
    SpaceP uk = tensor_space(u, ground_space(a.field()));
    return compose(tensor_map(identity_map(u), unit_map(a), uk, ua), unit_right_inv(u));
}

GMap conjugate_by_assoc(const GMap& d_right_nested, const SpaceP& left_nested)
{
    GMap as = assoc(left_nested);
    GMap d = restrict_map(d_right_nested, as.tgt(), as.tgt());
    return compose(assoc_inv(as.tgt()), compose(d, as));
}

void require_chain(const GMap& f, const Complex& x, const Complex& y, const std::string& what)
{
    if (auto n = chain_map_defect(f, x, y))
        fail(what + " is not a chain map in degree " + std::to_string(*n));
}

}  // namespace

TwistingVerdict is_twisting(const DGCoalgebra& c, const DGAlgebra& a, const GMap& tau)
{
    if (tau.deg() != -1)
        return {false, std::nullopt, "twisting map must have degree -1, got " + std::to_string(tau.deg())};
    if (tau.defined(0) && !tau.apply(0, c.unit_vec()).empty())
        return {false, 0, "twisting map does not vanish on the coaugmentation"};
    if (a.augmented)
        for (const auto& [n, m] : tau.blocks())
            if (n - 1 == 0)
                for (int j = 0; j < m.cols(); ++j)
                    if (!m.col(j).get(a.unit).is_zero())
                        return {false, n, "twisting map hits the unit"};
    GMap lhs = hom_boundary(tau, c.cx, a.cx);
    GMap rhs = cup(tau, tau, c, a);
    if (auto n = first_difference(lhs, rhs))
        return {false, n, "twisting identity fails in degree " + std::to_string(*n)};
    return {};
}

TwistingMap make_twisting(const CoalgebraP& c, const AlgebraP& a, GMap tau)
{
    auto v = is_twisting(*c, *a, tau);
    if (!v.ok)
        fail(v.reason);
    return {c, a, std::move(tau)};
}

TwistingMap zero_twisting(const CoalgebraP& c, const AlgebraP& a)
{
    return make_twisting(c, a, GMap(c->space(), a->space(), -1));
}

Complex twist_left(const DGModule& n, const DGComodule& x, const TwistingMap& t)
{
    SpaceP nx = tensor_space(n.space(), x.space());
    GMap d0 = tensor_differential(n.cx, x.cx, nx);
    return complex_with(nx, twisted(d0, opp_cap_action(t.map, n, x, nx), true));
}

Complex twist_right(const DGComodule& y, const DGModule& m, const TwistingMap& t)
{
    SpaceP ym = tensor_space(y.space(), m.space());
    GMap d0 = tensor_differential(y.cx, m.cx, ym);
    return complex_with(ym, twisted(d0, cap_action(t.map, y, m, ym), false));
}

ModuleP twisted_free_left(const TwistingMap& t, const DGComodule& x)
{
    Complex cx = twist_left(*regular_module(t.a, Side::right), x, t);
    auto fm = free_module(t.a, x.cx, Side::left);
    SpaceP src = tensor_space(t.a->space(), cx.space);
    return make_module({t.a, Side::left, cx, restrict_map(fm->act, src, cx.space)});
}

ComoduleP twisted_cofree_right(const TwistingMap& t, const DGModule& n)
{
    Complex cx = twist_left(n, *regular_comodule(t.c, Side::left), t);
    auto cf = cofree_comodule(t.c, n.cx, Side::right);
    return make_comodule({t.c, Side::right, cx, restrict_map(cf->coact, cx.space, tensor_space(cx.space, t.c->space()))});
}

ComoduleP twisted_cofree_left(const TwistingMap& t, const DGModule& m)
{
    Complex cx = twist_right(*regular_comodule(t.c, Side::right), m, t);
    auto cf = cofree_comodule(t.c, m.cx, Side::left);
    return make_comodule({t.c, Side::left, cx, restrict_map(cf->coact, cx.space, tensor_space(t.c->space(), cx.space))});
}

ModuleP twisted_free_right(const TwistingMap& t, const DGComodule& y)
{
    Complex cx = twist_right(y, *regular_module(t.a, Side::left), t);
    auto fm = free_module(t.a, y.cx, Side::right);
    SpaceP src = tensor_space(cx.space, t.a->space());
    return make_module({t.a, Side::right, cx, restrict_map(fm->act, src, cx.space)});
}

Complex twist_triple(const DGModule& n, const TwistingMap& t, const DGModule& m)
{
    auto cl = regular_comodule(t.c, Side::left);
    auto cr = regular_comodule(t.c, Side::right);
    SpaceP nc = tensor_space(n.space(), t.c->space());
    SpaceP s = tensor_space(nc, m.space());
    Complex ncx{nc, tensor_differential(n.cx, t.c->cx, nc)};
    GMap d = tensor_differential(ncx, m.cx, s);
    d = d + tensor_map(opp_cap_action(t.map, n, *cl, nc), identity_map(m.space()), s, s);
    GMap as = assoc(s);
    SpaceP cm = as.tgt()->right();
    GMap inner = tensor_map(identity_map(n.space()), cap_action(t.map, *cr, m, cm), as.tgt(), as.tgt());
    d = d - compose(assoc_inv(as.tgt()), compose(inner, as));
    return complex_with(s, d);
}

Complex twist_triple(const DGComodule& y, const TwistingMap& t, const DGComodule& x)
{
    auto al = regular_module(t.a, Side::left);
    auto ar = regular_module(t.a, Side::right);
    SpaceP ya = tensor_space(y.space(), t.a->space());
    SpaceP s = tensor_space(ya, x.space());
    Complex yax{ya, tensor_differential(y.cx, t.a->cx, ya)};
    GMap d = tensor_differential(yax, x.cx, s);
    d = d - tensor_map(cap_action(t.map, y, *al, ya), identity_map(x.space()), s, s);
    GMap as = assoc(s);
    SpaceP axs = as.tgt()->right();
    GMap inner = tensor_map(identity_map(y.space()), opp_cap_action(t.map, *ar, x, axs), as.tgt(), as.tgt());
    d = d + compose(assoc_inv(as.tgt()), compose(inner, as));
    return complex_with(s, d);
}

bool Bracketings::agree() const
{
    return !first_difference(inner.d, direct.d) && !first_difference(outer.d, direct.d);
}

Bracketings bracketings(const DGModule& n, const TwistingMap& t, const DGModule& m)
{
    Bracketings b;
    b.direct = twist_triple(n, t, m);
    Complex in = twist_left(n, *twisted_cofree_left(t, m), t);
    b.inner = complex_with(b.direct.space, conjugate_by_assoc(in.d, b.direct.space));
    Complex out = twist_right(*twisted_cofree_right(t, n), m, t);
    b.outer = complex_with(b.direct.space, restrict_map(out.d, b.direct.space, b.direct.space));
    return b;
}

Bracketings bracketings(const DGComodule& y, const TwistingMap& t, const DGComodule& x)
{
    Bracketings b;
    b.direct = twist_triple(y, t, x);
    Complex in = twist_right(y, *twisted_free_left(t, x), t);
    b.inner = complex_with(b.direct.space, conjugate_by_assoc(in.d, b.direct.space));
    Complex out = twist_left(*twisted_free_right(t, y), x, t);
    b.outer = complex_with(b.direct.space, restrict_map(out.d, b.direct.space, b.direct.space));
    return b;
}

GMap eps_acm(const TwistingMap& t, const DGModule& m)
{
    Complex src = twist_triple(*regular_module(t.a, Side::right), t, m);
    GMap collapse = collapse_right(t.a->space(), *t.c, src.space->left());
    GMap f = compose(m.act, tensor_map(collapse, identity_map(m.space()), src.space, m.act.src()));
    require_chain(f, src, m.cx, "eps^ACM");
    return f;
}

GMap eta_cax(const TwistingMap& t, const DGComodule& x)
{
    Complex tgt = twist_triple(*regular_comodule(t.c, Side::right), t, x);
    GMap insert = insert_right(t.c->space(), *t.a, tgt.space->left());
    GMap f = compose(tensor_map(insert, identity_map(x.space()), x.coact.tgt(), tgt.space), x.coact);
    require_chain(f, x.cx, tgt, "eta^CAX");
    return f;
}

GMap eps_nca(const TwistingMap& t, const DGModule& n)
{
    Complex src = twist_triple(n, t, *regular_module(t.a, Side::left));
    GMap collapse = collapse_right(n.space(), *t.c, src.space->left());
    GMap f = compose(n.act, tensor_map(collapse, identity_map(t.a->space()), src.space, n.act.src()));
    require_chain(f, src, n.cx, "eps^NCA");
    return f;
}

GMap eta_yac(const TwistingMap& t, const DGComodule& y)
{
    Complex tgt = twist_triple(y, t, *regular_comodule(t.c, Side::left));
    GMap insert = insert_right(y.space(), *t.a, tgt.space->left());
    GMap f = compose(tensor_map(insert, identity_map(t.c->space()), y.coact.tgt(), tgt.space), y.coact);
    require_chain(f, y.cx, tgt, "eta^YAC");
    return f;
}

namespace {

enum class Bound { p, n };

Bound twisting_polarity(const DGAlgebra& a, const DGCoalgebra& c)
{
    const Space& as = *a.space();
    const Space& cs = *c.space();
    auto vanish = [](const Space& s, long lo, long hi) {
        for (long n = lo; n <= hi; ++n)
            if (!s.determined(static_cast<int>(n)) || s.dim(static_cast<int>(n)))
                return false;
        return true;
    };
    auto below_zero = [&](const Space& s, int top) {
        return s.window().below && vanish(s, std::min<long>(s.window().lo, 0), top);
    };
    auto above_zero = [&](const Space& s, int bottom) {
        return s.window().above && vanish(s, bottom, std::max<long>(s.window().hi, 0));
    };
    if (!a.augmented || !c.coaugmented)
        fail("acyclicity needs an augmented algebra and a coaugmented coalgebra");
    bool units = as.dim(0) == 1 && cs.dim(0) == 1;
    if (units && below_zero(as, -1) && below_zero(cs, -1) && cs.dim(1) == 0)
        return Bound::p;
    if (units && above_zero(as, 1) && as.dim(-1) == 0 && above_zero(cs, 1))
        return Bound::n;
    fail("polarity violation: neither A-bar_{<=0} = 0 = C-bar_{<=1} nor A-bar_{>=-1} = 0 = C-bar_{>=0} holds");
}

}  // namespace

AcyclicCertificate acyclic_check(const TwistingMap& t, int cutoff)
{
    AcyclicCertificate cert;
    cert.cutoff = cutoff;
    Bound b = twisting_polarity(*t.a, *t.c);
    cert.polarity = b == Bound::p ? "p" : "n";
    Homology hl(twist_left(*regular_module(t.a, Side::right), *regular_comodule(t.c, Side::left), t));
    Homology hr(twist_right(*regular_comodule(t.c, Side::right), *regular_module(t.a, Side::left), t));
    int sgn = b == Bound::p ? 1 : -1;
    std::optional<int> fail_l, fail_r;
    int reached = -1;
    for (int k = 0; k <= cutoff - 1; ++k) {
        int n = sgn * k;
        if (!hl.certified(n) || !hr.certified(n))
            break;
        reached = k;
        int want = n == 0 ? 1 : 0;
        cert.left_ranks[n] = hl.rank(n);
        cert.right_ranks[n] = hr.rank(n);
        if (!fail_l && hl.rank(n) != want)
            fail_l = n;
        if (!fail_r && hr.rank(n) != want)
            fail_r = n;
    }
    cert.checked_lo = b == Bound::p ? 0 : -reached;
    cert.checked_hi = b == Bound::p ? reached : 0;
    if (fail_l.has_value() != fail_r.has_value())
        throw std::logic_error("acyclicity routes disagree: A|C " + std::string(fail_l ? "fails" : "passes") +
                               ", C|A " + (fail_r ? "fails" : "passes") + " within the certified window");
    cert.acyclic = !fail_l && reached == cutoff - 1;
    if (fail_l)
        cert.witness = std::abs(*fail_l) <= std::abs(*fail_r) ? *fail_l : *fail_r;
    return cert;
}

Transport transport_coalgebra(const GMap& gamma, const CoalgebraP& c, const TwistingMap& tp)
{
    check_coalgebra_morphism(gamma, *c, *tp.c);
    Transport r;
    r.tau = make_twisting(c, tp.a, compose(tp.map, gamma));
    auto al = regular_module(tp.a, Side::left);
    auto ar = regular_module(tp.a, Side::right);
    r.right_src = twist_right(*regular_comodule(c, Side::right), *al, r.tau);
    r.right_tgt = twist_right(*regular_comodule(tp.c, Side::right), *al, tp);
    r.left_src = twist_left(*ar, *regular_comodule(c, Side::left), r.tau);
    r.left_tgt = twist_left(*ar, *regular_comodule(tp.c, Side::left), tp);
    GMap ida = identity_map(tp.a->space());
    r.right_map = tensor_map(gamma, ida, r.right_src.space, r.right_tgt.space);
    r.left_map = tensor_map(ida, gamma, r.left_src.space, r.left_tgt.space);
    require_chain(r.right_map, r.right_src, r.right_tgt, "gamma|A");
    require_chain(r.left_map, r.left_src, r.left_tgt, "A|gamma");
    return r;
}

Transport transport_algebra(const GMap& alpha, const AlgebraP& a, const TwistingMap& tp)
{
    check_algebra_morphism(alpha, *tp.a, *a);
    Transport r;
    r.tau = make_twisting(tp.c, a, compose(alpha, tp.map));
    auto cl = regular_comodule(tp.c, Side::left);
    auto cr = regular_comodule(tp.c, Side::right);
    r.right_src = twist_right(*cr, *regular_module(tp.a, Side::left), tp);
    r.right_tgt = twist_right(*cr, *regular_module(a, Side::left), r.tau);
    r.left_src = twist_left(*regular_module(tp.a, Side::right), *cl, tp);
    r.left_tgt = twist_left(*regular_module(a, Side::right), *cl, r.tau);
    GMap idc = identity_map(tp.c->space());
    r.right_map = tensor_map(idc, alpha, r.right_src.space, r.right_tgt.space);
    r.left_map = tensor_map(alpha, idc, r.left_src.space, r.left_tgt.space);
    require_chain(r.right_map, r.right_src, r.right_tgt, "C|alpha");
    require_chain(r.left_map, r.left_src, r.left_tgt, "alpha|C");
    return r;
}

Resolution natural_resolution(const TwistingMap& t, const ModuleP& m)
{
    Resolution r;
    r.complex = twist_triple(*regular_module(t.a, Side::right), t, *m);
    r.eps = eps_acm(t, *m);
    r.verdict = quasi_iso_check(r.eps, r.complex, m->cx);
    return r;
}

}  // namespace kd
