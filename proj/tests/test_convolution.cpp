#include "kd/convolution.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace kd;

namespace {

Field F = Field::prime(101);

AlgebraP load(const std::string& name) { return from_presentation(load_presentation(oracle::fixture(name)), F); }

// T^c(a, b), |a| = 2, |b| = 3, with the coderivation induced by [b] -> [a], truncated to degrees <= cutoff
CoalgebraP dg_tensor_coalgebra(int cutoff)
{
    auto t = tensor_coalgebra(F, {{"a", 2}, {"b", 3}}, cutoff);
    GMap q(t->space(), t->space(), -1);
    Mat m(1, 1);
    m.add(0, 0, F.one());
    q.set(3, m);
    DGCoalgebra c = *t;
    c.cx = complex_with(t->space(), coderivation_extend(*t, q));
    return truncate_coalgebra(make_coalgebra(std::move(c)));
}

CoalgebraP plain_tensor_coalgebra(int cutoff)
{
    return truncate_coalgebra(tensor_coalgebra(F, {{"w", 2}}, cutoff));
}

bool same(const GMap& f, const GMap& g) { return !first_difference(f, g); }

}  // namespace

TEST_CASE("convolution unit acts as identity")
{
    std::mt19937 rng(1);
    auto c = dg_tensor_coalgebra(7);
    auto a = load("dgext.alg");
    auto x = regular_comodule(c, Side::left);
    auto m = regular_module(a, Side::left);
    GMap u = convolution_unit(*c, *a);
    for (int deg : {-3, -1, 0, 2}) {
        GMap zeta = oracle::random_map(c->space(), a->space(), deg, rng);
        CHECK(same(cup(u, zeta, *x, *m), zeta));
        CHECK(same(cup(zeta, u, *c, *a), zeta));
        CHECK(same(opp_cup(u, zeta, *c, *a), zeta));
    }
    auto y = regular_comodule(c, Side::right);
    SpaceP ym = tensor_space(c->space(), a->space());
    CHECK(same(cap_action(u, *y, *m, ym), identity_map(ym)));
    auto n = regular_module(a, Side::right);
    CHECK(same(opp_cap_action(u, *n, *x), identity_map(tensor_space(a->space(), c->space()))));
}

TEST_CASE("cup square of a one-letter twisting vanishes on [w|w]")
{
    auto c = plain_tensor_coalgebra(6);
    auto a = load("kx2.alg");
    GMap tau(c->space(), a->space(), -1);
    Mat m(1, 1);
    m.add(0, 0, F.one());
    tau.set(2, m);
    GMap sq = cup(tau, tau, *c, *a);
    CHECK(sq.deg() == -2);
    CHECK(sq.apply(4, SVec::unit(0, F.one())).empty());
    // with |w| = 2 the Koszul sign is trivial, so over k[x]/(x^3) the square is x^2
    auto t3 = load("kx3.alg");
    GMap tau3(c->space(), t3->space(), -1);
    tau3.set(2, m);
    CHECK(cup(tau3, tau3, *c, *t3).apply(4, SVec::unit(0, F.one())) == SVec::unit(0, F.one()));
}

TEST_CASE("Leibniz rule for cup products")
{
    std::mt19937 rng(2);
    auto c = dg_tensor_coalgebra(7);
    auto a = load("dgext.alg");
    auto x = regular_comodule(c, Side::left);
    auto m = regular_module(a, Side::left);
    for (int trial = 0; trial < 12; ++trial) {
        int p = static_cast<int>(rng() % 7) - 5, q = static_cast<int>(rng() % 7) - 5;
        GMap xi = oracle::random_map(c->space(), a->space(), p, rng);
        GMap zeta = oracle::random_map(c->space(), a->space(), q, rng);
        GMap lhs = hom_boundary(cup(xi, zeta, *x, *m), c->cx, a->cx);
        GMap rhs = cup(hom_boundary(xi, c->cx, a->cx), zeta, *x, *m) +
                   scaled(cup(xi, hom_boundary(zeta, c->cx, a->cx), *x, *m), parity_sign(F, p));
        INFO("degrees " << p << ", " << q);
        CHECK(same(lhs, rhs));
    }
}

TEST_CASE("cap products form a representation")
{
    std::mt19937 rng(3);
    auto c = dg_tensor_coalgebra(7);
    auto a = load("dgext.alg");
    auto y = regular_comodule(c, Side::right);
    auto m = regular_module(a, Side::left);
    auto n = regular_module(a, Side::right);
    auto x = regular_comodule(c, Side::left);
    SpaceP ym = tensor_space(c->space(), a->space());
    SpaceP nx = tensor_space(a->space(), c->space());
    for (int trial = 0; trial < 8; ++trial) {
        int p = static_cast<int>(rng() % 6) - 4, q = static_cast<int>(rng() % 6) - 4;
        GMap tau = oracle::random_map(c->space(), a->space(), p, rng);
        GMap xi = oracle::random_map(c->space(), a->space(), q, rng);
        CHECK(same(compose(cap_action(tau, *y, *m, ym), cap_action(xi, *y, *m, ym)),
                   cap_action(cup(tau, xi, *c, *a), *y, *m, ym)));
        CHECK(same(compose(opp_cap_action(tau, *n, *x, nx), opp_cap_action(xi, *n, *x, nx)),
                   opp_cap_action(opp_cup(tau, xi, *c, *a), *n, *x, nx)));
        // opposite products are signed swaps of cup products
        CHECK(same(opp_cup(tau, xi, *c, *a), scaled(cup(xi, tau, *c, *a), koszul_sign(F, p, q))));
        CHECK(same(opp_cup(tau, xi, *y, *n), opp_cup(tau, xi, *c, *a)));
    }
}

TEST_CASE("cap product matches the elementwise formula")
{
    std::mt19937 rng(4);
    auto c = dg_tensor_coalgebra(6);
    auto a = load("dgext.alg");
    auto y = regular_comodule(c, Side::right);
    auto m = regular_module(a, Side::left);
    SpaceP ym = tensor_space(c->space(), a->space());
    const Space& cc = *c->cop.tgt();
    for (int p : {-2, -1, 0, 1}) {
        GMap xi = oracle::random_map(c->space(), a->space(), p, rng);
        GMap lam = cap_action(xi, *y, *m, ym);
        for (int n = 0; n <= 6; ++n)
            for (const auto& blk : ym->blocks(n))
                for (int i = 0; i < blk.left_dim; ++i)
                    for (int j = 0; j < blk.right_dim; ++j) {
                        int yd = blk.left_deg, md = n - yd;
                        VecBuilder want;
                        for (const auto& [idx, v] : c->coproduct(yd, SVec::unit(i, F.one()))) {
                            auto [ld, yi, ci] = cc.tensor_split(yd, idx);
                            SVec xc = xi.apply(yd - ld, SVec::unit(ci, F.one()));
                            for (const auto& [k, w] : xc) {
                                SVec prod = a->product(yd - ld + p, SVec::unit(k, F.one()), md, SVec::unit(j, F.one()));
                                for (const auto& [r, z] : prod)
                                    want.add(ym->tensor_index(n + p, ld, yi, r), koszul_sign(F, p, ld) * v * w * z);
                            }
                        }
                        CHECK(lam.apply(n, SVec::unit(blk.offset + i * blk.right_dim + j, F.one())) == want.build());
                    }
    }
}

TEST_CASE("materialized convolution algebras")
{
    auto c = plain_tensor_coalgebra(4);
    auto a = load("kx3.alg");
    auto xi = convolution_algebra(c, a);
    auto xo = convolution_algebra(c, a, true);
    CHECK(xi->space()->dim(0) == 2);
    CHECK(xi->space()->dim(-2) == 2);
    // the opposite construction is the opposite algebra
    auto op = opposite(xi);
    CHECK(same(op->mul, xo->mul));

    auto cd = dg_tensor_coalgebra(5);
    auto ad = load("dgext.alg");
    CHECK_NOTHROW(convolution_algebra(cd, ad));
    CHECK_NOTHROW(convolution_algebra(cd, ad, true));
}

TEST_CASE("side mismatches are rejected")
{
    auto c = plain_tensor_coalgebra(4);
    auto a = load("kx2.alg");
    GMap u = convolution_unit(*c, *a);
    CHECK_THROWS_AS(cup(u, u, *regular_comodule(c, Side::right), *regular_module(a, Side::left)), StructuralError);
    CHECK_THROWS_AS(opp_cup(u, u, *regular_comodule(c, Side::right), *regular_module(a, Side::left)),
                    StructuralError);
}

TEST_CASE("adjunction maps are inverse and equivariant")
{
    std::mt19937 rng(5);
    auto c = dg_tensor_coalgebra(6);
    auto a = load("dgext.alg");
    auto x = regular_comodule(c, Side::left);
    auto m = regular_module(a, Side::left);
    auto y = regular_comodule(c, Side::right);
    auto n = regular_module(a, Side::right);
    auto ax = free_module(a, x->cx, Side::left);
    auto ya = free_module(a, y->cx, Side::right);
    auto cm = cofree_comodule(c, m->cx, Side::left);
    auto nc = cofree_comodule(c, n->cx, Side::right);
    for (int deg : {0, -1, 2}) {
        GMap zeta = oracle::random_map(c->space(), a->space(), deg, rng);
        GMap theta = compose(m->act, tensor_map(identity_map(a->space()), zeta, ax->space(), m->act.src()));
        GMap vartheta = omega_ac(theta, *x, *m);
        CHECK(!comodule_map_defect(vartheta, *x, *cm));
        CHECK(same(omega_ca(vartheta, *x, *m), theta));
        CHECK(same(omega_ac(omega_ca(vartheta, *x, *m), *x, *m), vartheta));

        GMap theta_r = compose(n->act, tensor_map(zeta, identity_map(a->space()), ya->space(), n->act.src()));
        GMap vartheta_r = omega_ac_right(theta_r, *y, *n);
        CHECK(!comodule_map_defect(vartheta_r, *y, *nc));
        CHECK(same(omega_ca_right(vartheta_r, *y, *n), theta_r));

        GMap xi = oracle::random_map(c->space(), a->space(), -1, rng);
        INFO("zeta degree " << deg);
        auto y_c = regular_comodule(c, Side::right);
        auto n_a = regular_module(a, Side::right);
        GMap cap_cm = cap_action(xi, *y_c, *m, cm->space());
        GMap ocap_ax = opp_cap_action(xi, *n_a, *x, ax->space());
        // the identities hold for morphisms; for maps of degree d they pick up (-1)^{|xi| d}
        Scalar sg = koszul_sign(F, xi.deg(), deg);
        CHECK(same(omega_ca(compose(cap_cm, vartheta), *x, *m), scaled(compose(omega_ca(vartheta, *x, *m), ocap_ax), sg)));
        CHECK(same(omega_ac(compose(theta, ocap_ax), *x, *m), scaled(compose(cap_cm, omega_ac(theta, *x, *m)), sg)));

        auto m_a = regular_module(a, Side::left);
        GMap ocap_nc = opp_cap_action(xi, *n, *regular_comodule(c, Side::left), nc->space());
        GMap cap_ya = cap_action(xi, *y, *m_a, ya->space());
        CHECK(same(omega_ca_right(compose(ocap_nc, vartheta_r), *y, *n),
                   scaled(compose(omega_ca_right(vartheta_r, *y, *n), cap_ya), sg)));
        CHECK(same(omega_ac_right(compose(theta_r, cap_ya), *y, *n),
                   scaled(compose(ocap_nc, omega_ac_right(theta_r, *y, *n)), sg)));
    }

    GMap bad = oracle::random_map(c->space(), cm->space(), 0, rng);
    CHECK_THROWS_WITH_AS(omega_ca(bad, *x, *m), doctest::Contains("not a comodule map"), StructuralError);
    GMap bad_t = compose(m->act, tensor_map(identity_map(a->space()), convolution_unit(*c, *a), ax->space(), m->act.src()));
    Mat b1 = bad_t.block(1);
    b1.add(0, 0, F.one());
    bad_t.set(1, b1);
    CHECK_THROWS_WITH_AS(omega_ac(bad_t, *x, *m), doctest::Contains("not a module map"), StructuralError);
}
