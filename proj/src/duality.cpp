#include "kd/duality.hpp"

#include <cstdlib>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw StructuralError(what); }

Polarity flipped(Polarity p)
{
    switch (p) {
    case Polarity::p: return Polarity::n;
    case Polarity::n: return Polarity::p;
    default: return Polarity::none;
    }
}

// inverse of a map whose blocks are signed permutations
GMap invert_signed_permutation(const GMap& g, const std::string& name)
{
    GMap r(g.tgt(), g.src(), -g.deg());
    for (int n : r.domain()) {
        int m = n + r.deg();
        if (!r.src()->dim(n) && !r.tgt()->dim(m))
            continue;
        if (!g.defined(m)) {
            r.undefine(n);
            continue;
        }
        Mat b = g.blocks().at(m);
        bool ok = b.rows() == b.cols();
        for (int c = 0; ok && c < b.cols(); ++c) {
            const SVec& col = b.col(c);
            ok = col.size() == 1 && (col.top_value().is_one() || (-col.top_value()).is_one());
        }
        if (!ok || rank(b, g.field()) != b.cols())
            fail(name + " is not bijective in degree " + std::to_string(m));
        r.set(n, b.transposed());
    }
    return r;
}

GMap diagonal_sign(const SpaceP& src, const SpaceP& tgt)
{
    const Field& f = src->field();
    GMap r(src, tgt, 0);
    for (int n : r.domain())
        if (src->dim(n))
            r.set(n, Mat::identity(src->dim(n), f).scaled(parity_sign(f, n)));
    return r;
}

void require_chain(const GMap& f, const Complex& x, const Complex& y, const std::string& name)
{
    if (auto n = chain_map_defect(f, x, y))
        throw std::logic_error("internal sign error: " + name + " is not a chain map in degree " + std::to_string(*n));
}

// rank-based injectivity and surjectivity on the defined degrees
std::pair<bool, bool> rank_profile(const GMap& f)
{
    bool inj = true, bij = true;
    for (int n : f.src()->degrees()) {
        if (!f.defined(n))
            continue;
        int r = f.src()->dim(n) ? rank(f.block(n), f.field()) : 0;
        inj = inj && r == f.src()->dim(n);
        bij = bij && r == f.src()->dim(n) && r == f.tgt()->dim(n + f.deg());
    }
    for (int n : f.tgt()->degrees())
        if (f.tgt()->dim(n) && f.src()->known(n - f.deg()) && !f.src()->dim(n - f.deg()))
            bij = false;
    return {inj, bij};
}

bool finite(const Space& s) { return s.window().below && s.window().above; }

// a left comodule over C** pulled back to C along the evaluation isomorphism
ComoduleP pull_back_double_dual(const DGComodule& x, const CoalgebraP& c)
{
    GMap back = evaluation_inverse(x.coalg->space(), c->space());
    SpaceP tgt = tensor_space(c->space(), x.space());
    GMap coact = compose(tensor_map(back, identity_map(x.space()), x.coact.tgt(), tgt), x.coact);
    return make_comodule({c, Side::left, x.cx, coact});
}

// xi in C*_{-i} given by the dual of basis vector w of C_i, applied to the C-factor of c|x or y|c
Scalar pair_dual(int i, int w, int deg, int idx, const Field& f)
{
    return deg == i && idx == w ? f.one() : f.zero();
}

}  // namespace

GMap varpi_inverse(const SpaceP& u, const SpaceP& v)
{
    return invert_signed_permutation(varpi(u, v), "varpi");
}

GMap evaluation(const SpaceP& u) { return diagonal_sign(u, dual_space(dual_space(u))); }

GMap evaluation_inverse(const SpaceP& uss, const SpaceP& u) { return diagonal_sign(uss, u); }

AlgebraP dual_algebra(const CoalgebraP& c)
{
    DGAlgebra a;
    a.cx = dual(c->cx);
    GMap prod = compose(dual_map(c->cop), varpi(c->space(), c->space()));
    a.mul = restrict_map(prod, tensor_space(a.cx.space, a.cx.space), a.cx.space);
    a.unit = c->unit;
    a.augmented = c->coaugmented;
    a.polarity = flipped(c->polarity);
    return make_algebra(std::move(a));
}

CoalgebraP dual_coalgebra(const AlgebraP& a)
{
    const Window& w = a->space()->window();
    if (!w.below && !w.above)
        fail("dual coalgebra needs an algebra that vanishes in all degrees beyond one side");
    DGCoalgebra c;
    c.cx = dual(a->cx);
    GMap cop = compose(varpi_inverse(a->space(), a->space()), dual_map(a->mul));
    c.cop = restrict_map(cop, c.cx.space, tensor_space(c.cx.space, c.cx.space));
    c.unit = a->unit;
    c.coaugmented = a->augmented;
    c.polarity = flipped(a->polarity);
    return make_coalgebra(std::move(c));
}

ModuleP dual_module(const DGComodule& x, const AlgebraP& cstar)
{
    Complex cx = dual(x.cx);
    const SpaceP& c = x.coalg->space();
    bool left = x.side == Side::left;
    GMap pairing = left ? varpi(c, x.space()) : varpi(x.space(), c);
    GMap act = compose(dual_map(x.coact), pairing);
    SpaceP src = left ? tensor_space(cstar->space(), cx.space) : tensor_space(cx.space, cstar->space());
    return make_module({cstar, x.side, cx, restrict_map(act, src, cx.space)});
}

ComoduleP dual_comodule(const DGModule& m, const CoalgebraP& astar)
{
    Complex cx = dual(m.cx);
    const SpaceP& a = m.alg->space();
    bool left = m.side == Side::left;
    GMap inv = left ? varpi_inverse(a, m.space()) : varpi_inverse(m.space(), a);
    GMap coact = compose(inv, dual_map(m.act));
    SpaceP tgt = left ? tensor_space(astar->space(), cx.space) : tensor_space(cx.space, astar->space());
    return make_comodule({astar, m.side, cx, restrict_map(coact, cx.space, tgt)});
}

Sigma sigma(const AlgebraP& a, const CoalgebraP& c, bool opposite)
{
    Sigma s;
    AlgebraP cstar = dual_algebra(c);
    s.src = opposite ? tensor_product(kd::opposite(a), kd::opposite(cstar)) : tensor_product(a, cstar);
    s.tgt = convolution_algebra(c, a, opposite);
    const SpaceP& src = s.src->space();
    const SpaceP& tgt = s.tgt->space();
    const Space& cs = *c->space();
    const Space& as = *a->space();
    GMap m(src, tgt, 0);
    for (int n : m.domain()) {
        if (!src->dim(n))
            continue;
        if (!tgt->known(n)) {
            m.undefine(n);
            continue;
        }
        auto off = hom_offsets(cs, as, n);
        Mat b(tgt->dim(n), src->dim(n));
        for (const auto& blk : src->blocks(n)) {
            int j = blk.left_deg, i = j - n;  // a in A_j, xi dual to C_i
            for (int u = 0; u < blk.left_dim; ++u)
                for (int w = 0; w < blk.right_dim; ++w)
                    b.set_col(blk.offset + u * blk.right_dim + w,
                              SVec::unit(off.at(i) + w * as.dim(j) + u, a->field().one()));
        }
        m.set(n, std::move(b));
    }
    check_algebra_morphism(m, *s.src, *s.tgt);
    s.map = std::move(m);
    std::tie(s.injective, s.bijective) = rank_profile(s.map);
    const Window& wa = as.window();
    const Window& wc = cs.window();
    s.hypotheses = finite(as) || finite(cs) || (wa.below && wc.above) || (wa.above && wc.below);
    return s;
}

namespace {

struct SigmaElement {
    int a_deg, a_idx;  // a in A
    int c_deg, c_idx;  // xi dual to this basis vector of C
    GMap image;        // sigma(a|xi) as a map C -> A
};

std::vector<SigmaElement> sigma_basis(const Sigma& s, const SpaceP& cspace, const SpaceP& aspace)
{
    std::vector<SigmaElement> out;
    const SpaceP& src = s.src->space();
    for (int p : src->degrees())
        for (int idx = 0; idx < src->dim(p); ++idx) {
            if (!s.map.defined(p))
                continue;
            auto [j, u, w] = src->tensor_split(p, idx);
            SVec h = s.map.apply(p, SVec::unit(idx, s.src->field().one()));
            out.push_back({j, u, j - p, w, hom_map(cspace, aspace, p, h)});
        }
    return out;
}

}  // namespace

std::optional<int> sigma_defect(const Sigma& s, const DGComodule& y, const DGModule& m)
{
    const Field& f = m.field();
    const SpaceP& cspace = y.coalg->space();
    SpaceP ym = tensor_space(y.space(), m.space());
    for (const auto& e : sigma_basis(s, cspace, m.alg->space())) {
        int p = e.image.deg();
        int xi_deg = -e.c_deg;
        GMap lhs = cap_action(e.image, y, m, ym);
        GMap rhs(ym, ym, p);
        for (int n : rhs.domain()) {
            if (!ym->dim(n))
                continue;
            if (!lhs.defined(n)) {
                rhs.undefine(n);
                continue;
            }
            Mat b(ym->dim(n + p), ym->dim(n));
            for (const auto& blk : ym->blocks(n))
                for (int yi = 0; yi < blk.left_dim; ++yi) {
                    int jy = blk.left_deg;
                    // xi cap y = sum (-1)^{|xi||y_i|} y_i xi(c_i)
                    SVec cap;
                    int ydeg = jy + xi_deg;
                    SVec co = y.coact.apply(jy, SVec::unit(yi, f.one()));
                    VecBuilder acc;
                    const SpaceP& yc = y.coact.tgt();
                    for (const auto& [t, v] : co) {
                        auto [dy, iy, ic] = yc->tensor_split(jy, t);
                        Scalar pr = pair_dual(e.c_deg, e.c_idx, jy - dy, ic, f);
                        if (!pr.is_zero())
                            acc.add(iy, koszul_sign(f, xi_deg, dy) * v * pr);
                    }
                    cap = acc.build();
                    for (int mi = 0; mi < blk.right_dim; ++mi) {
                        int jm = n - jy;
                        SVec am = m.act_on(e.a_deg, SVec::unit(e.a_idx, f.one()), jm, SVec::unit(mi, f.one()));
                        VecBuilder col;
                        Scalar sg = koszul_sign(f, e.a_deg, xi_deg + jy);
                        for (const auto& [q, cq] : cap)
                            for (const auto& [r, ar] : am)
                                col.add(ym->tensor_index(n + p, ydeg, q, r), sg * cq * ar);
                        b.set_col(blk.offset + yi * blk.right_dim + mi, col.build());
                    }
                }
            rhs.set(n, std::move(b));
        }
        if (first_difference(lhs, rhs))
            return p;
    }
    return std::nullopt;
}

std::optional<int> sigma_opp_defect(const Sigma& s, const DGModule& n, const DGComodule& x)
{
    const Field& f = n.field();
    const SpaceP& cspace = x.coalg->space();
    SpaceP nx = tensor_space(n.space(), x.space());
    for (const auto& e : sigma_basis(s, cspace, n.alg->space())) {
        int p = e.image.deg();
        GMap lhs = opp_cap_action(e.image, n, x, nx);
        GMap rhs(nx, nx, p);
        for (int d : rhs.domain()) {
            if (!nx->dim(d))
                continue;
            if (!lhs.defined(d)) {
                rhs.undefine(d);
                continue;
            }
            Mat b(nx->dim(d + p), nx->dim(d));
            for (const auto& blk : nx->blocks(d))
                for (int ni = 0; ni < blk.left_dim; ++ni) {
                    int jn = blk.left_deg;
                    SVec na = n.act_on(e.a_deg, SVec::unit(e.a_idx, f.one()), jn, SVec::unit(ni, f.one()));
                    for (int xi = 0; xi < blk.right_dim; ++xi) {
                        int jx = d - jn;
                        // xi cap x = sum xi(c_i) x_i
                        SVec co = x.coact.apply(jx, SVec::unit(xi, f.one()));
                        VecBuilder acc;
                        const SpaceP& cx = x.coact.tgt();
                        for (const auto& [t, v] : co) {
                            auto [dc, ic, ix] = cx->tensor_split(jx, t);
                            Scalar pr = pair_dual(e.c_deg, e.c_idx, dc, ic, f);
                            if (!pr.is_zero())
                                acc.add(ix, v * pr);
                        }
                        SVec cap = acc.build();
                        VecBuilder col;
                        Scalar sg = koszul_sign(f, e.a_deg - e.c_deg, jn);
                        for (const auto& [q, nq] : na)
                            for (const auto& [r, cr] : cap)
                                col.add(nx->tensor_index(d + p, jn + e.a_deg, q, r), sg * nq * cr);
                        b.set_col(blk.offset + ni * blk.right_dim + xi, col.build());
                    }
                }
            rhs.set(d, std::move(b));
        }
        if (first_difference(lhs, rhs))
            return p;
    }
    return std::nullopt;
}

Delta delta_algebra(const CoalgebraP& c, const AlgebraP& a)
{
    Delta d;
    d.src = convolution_algebra(c, a);
    d.tgt = convolution_algebra(dual_coalgebra(a), dual_algebra(c));
    d.map = restrict_map(delta_embed(c->cx, a->cx), d.src->space(), d.tgt->space());
    check_algebra_morphism(d.map, *d.src, *d.tgt);
    return d;
}

TwistingMap dual_twisting(const TwistingMap& t)
{
    CoalgebraP astar = dual_coalgebra(t.a);
    AlgebraP cstar = dual_algebra(t.c);
    return make_twisting(astar, cstar, restrict_map(dual_map(t.map), astar->space(), cstar->space()));
}

PairingMorphism varpi_tau(const DGModule& n, const DGComodule& x, const TwistingMap& t, const TwistingMap& tstar)
{
    PairingMorphism r;
    auto nstar = dual_comodule(n, tstar.c);
    auto xstar = dual_module(x, tstar.a);
    r.src = twist_right(*nstar, *xstar, tstar);
    r.tgt = dual(twist_left(n, x, t));
    r.map = restrict_map(varpi(n.space(), x.space()), r.src.space, r.tgt.space);
    require_chain(r.map, r.src, r.tgt, "varpi^NX");
    std::tie(r.injective, r.bijective) = rank_profile(r.map);
    return r;
}

PairingMorphism varpi_tau(const DGComodule& y, const DGModule& m, const TwistingMap& t, const TwistingMap& tstar)
{
    PairingMorphism r;
    auto ystar = dual_module(y, tstar.a);
    auto mstar = dual_comodule(m, tstar.c);
    r.src = twist_left(*ystar, *mstar, tstar);
    r.tgt = dual(twist_right(y, m, t));
    r.map = restrict_map(varpi(y.space(), m.space()), r.src.space, r.tgt.space);
    require_chain(r.map, r.src, r.tgt, "varpi^YM");
    std::tie(r.injective, r.bijective) = rank_profile(r.map);
    return r;
}

namespace {

MooreValue compare_value(const std::string& name, const Homology& h, const Homology* expected, int cutoff)
{
    MooreValue v;
    v.name = name;
    v.ok = true;
    for (int n = -(cutoff - 1); n <= cutoff - 1; ++n) {
        bool cert = h.certified(n) && (!expected || expected->certified(n));
        if (!cert) {
            v.ok = false;
            continue;
        }
        v.checked.push_back(n);
        int want = expected ? expected->rank(n) : (n == 0 ? 1 : 0);
        if (h.rank(n) || want) {
            v.ranks[n] = h.rank(n);
            v.expected[n] = want;
        }
        if (h.rank(n) != want)
            v.ok = false;
    }
    return v;
}

}  // namespace

MooreReport moore_value_checks(const TwistingMap& t, int cutoff)
{
    TwistingMap ts = dual_twisting(t);
    const AlgebraP& cstar = ts.a;
    const CoalgebraP& astar = ts.c;
    MooreReport r;

    Homology ha(t.a->cx);
    r.values.push_back(compare_value("A|x k ~ A",
                                     Homology(twisted_free_left(t, *trivial_comodule(t.c, Side::left))->cx), &ha, cutoff));

    auto css = dual_coalgebra(cstar);
    auto cdd = pull_back_double_dual(*dual_comodule(*regular_module(cstar, Side::left), css), t.c);
    r.values.push_back(compare_value("A|x C** ~ k", Homology(twisted_free_left(t, *cdd)->cx), nullptr, cutoff));

    Homology hc(cstar->cx);
    r.values.push_back(compare_value(
        "C*|x k ~ C*", Homology(twisted_free_left(ts, *trivial_comodule(astar, Side::left))->cx), &hc, cutoff));
    r.values.push_back(compare_value(
        "C*|x A* ~ k", Homology(twisted_free_left(ts, *regular_comodule(astar, Side::left))->cx), nullptr, cutoff));

    r.ok = true;
    for (const auto& v : r.values)
        r.ok = r.ok && v.ok;
    return r;
}

MooreUnit moore_unit_check(const TwistingMap& t, const ModuleP& m, int cutoff)
{
    if (m->side != Side::left)
        fail("Moore unit check needs a left module");
    TwistingMap ts = dual_twisting(t);
    const AlgebraP& cstar = ts.a;
    auto mstar = dual_comodule(*m, ts.c);
    auto l = twisted_free_left(ts, *mstar);
    auto lstar = pull_back_double_dual(*dual_comodule(*l, dual_coalgebra(cstar)), t.c);

    MooreUnit u;
    u.src = twisted_free_left(t, *lstar)->cx;
    Complex cm = twist_right(*regular_comodule(t.c, Side::right), *m, t);
    // theta: (C*|M*)* -> (C|M)** -> C|M
    GMap vd = dual_map(varpi(t.c->space(), m->space()));
    GMap back = evaluation_inverse(vd.src(), cm.space);
    GMap theta = restrict_map(compose(back, invert_signed_permutation(vd, "varpi*")), lstar->space(), cm.space);
    require_chain(theta, lstar->cx, cm, "((varpi^CM)*)^-1");

    GMap eps = eps_acm(t, *m);
    SpaceP a_cm = tensor_space(t.a->space(), cm.space);
    GMap lift = tensor_map(identity_map(t.a->space()), theta, u.src.space, a_cm);
    GMap rebr = restrict_map(assoc_inv(a_cm), a_cm, eps.src());
    u.map = compose(eps, compose(rebr, lift));
    require_chain(u.map, u.src, m->cx, "Moore unit");
    u.verdict = quasi_iso_check(u.map, u.src, m->cx);
    u.ok = true;
    for (int n = -(cutoff - 1); n <= cutoff - 1; ++n) {
        auto c = u.verdict.certified.find(n);
        bool cert = c != u.verdict.certified.end() ? c->second
                                                   : (u.src.space->determined(n) && m->space()->determined(n) &&
                                                      u.src.space->determined(n + 1) && m->space()->determined(n + 1));
        if (!cert) {
            u.ok = false;
            continue;
        }
        u.checked.push_back(n);
        auto i = u.verdict.iso.find(n);
        if (i != u.verdict.iso.end() && !i->second)
            u.ok = false;
    }
    return u;
}

ExtTable ext_ranks(const TwistingMap& t, const ModuleP& m, int cutoff)
{
    if (m->side != Side::left)
        fail("Ext ranks need a left module");
    auto cert = acyclic_check(t, cutoff);
    if (!cert.acyclic)
        fail("twisting map is not certified acyclic up to cutoff " + std::to_string(cutoff));
    Homology h(dual(twist_right(*regular_comodule(t.c, Side::right), *m, t)));
    ExtTable e;
    bool any = false;
    for (int n = -(cutoff - 1); n <= cutoff - 1; ++n) {
        if (!h.certified(n))
            continue;
        e.ranks[n] = h.rank(n);
        e.checked_lo = any ? std::min(e.checked_lo, n) : n;
        e.checked_hi = any ? std::max(e.checked_hi, n) : n;
        any = true;
    }
    bool ground = m->space()->total_dim() == 1 && m->space()->dim(0) == 1 && t.a->augmented;
    if (ground) {
        auto k = trivial_module(t.a, Side::left);
        ground = !first_difference(restrict_map(k->act, m->act.src(), m->space()), m->act);
    }
    if (ground) {
        Homology hc(dual(t.c->cx));
        bool same = true;
        for (const auto& [n, r] : e.ranks)
            same = same && hc.certified(n) && hc.rank(n) == r;
        e.matches_dual_coalgebra = same;
    }
    return e;
}

}  // namespace kd
