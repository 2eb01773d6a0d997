#include "kd/koszul.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <cctype>
#include <cstdlib>
#include <functional>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw StructuralError(what); }

Polarity flipped(Polarity p) { return p == Polarity::p ? Polarity::n : Polarity::p; }

void require_quadratic_setting(const DGAlgebra& a)
{
    if (a.polarity == Polarity::none)
        fail("polarity violation: quadratic duality needs polarity p or n");
    if (!a.augmented)
        fail("quadratic duality needs an augmented algebra");
    if (!is_zero_map(a.cx.d))
        fail("quadratic duality needs a graded algebra (zero differential)");
}

// the reduced basis vectors of A in degree n
std::vector<int> reduced_basis(const DGAlgebra& a, int n)
{
    std::vector<int> r;
    if (!a.space()->known(n))
        return r;
    for (int i = 0; i < a.space()->dim(n); ++i)
        if (!a.is_unit(n, i))
            r.push_back(i);
    return r;
}

struct Powers {
    std::vector<int> degrees;  // known degrees of A, ascending
    std::map<int, std::shared_ptr<Echelon>> sq, cube;
};

Powers ideal_powers(const DGAlgebra& a)
{
    const Field& f = a.field();
    const Window& w = a.space()->window();
    Powers p;
    for (int n = w.lo; n <= w.hi; ++n)
        p.degrees.push_back(n);
    for (int m : p.degrees) {
        auto sq = std::make_shared<Echelon>(f);
        for (int i : p.degrees) {
            int j = m - i;
            if (i == 0 || j == 0 || !a.space()->known(j))
                continue;
            for (int x : reduced_basis(a, i))
                for (int y : reduced_basis(a, j))
                    sq->insert(a.product(i, x, j, y));
        }
        p.sq[m] = sq;
    }
    for (int m : p.degrees) {
        auto cube = std::make_shared<Echelon>(f);
        for (int i : p.degrees) {
            int j = m - i;
            if (i == 0 || j == 0 || !a.space()->known(j))
                continue;
            for (const SVec& x : p.sq.at(i)->basis())
                for (int y : reduced_basis(a, j))
                    cube->insert(a.product(i, x, j, SVec::unit(y, f.one())));
        }
        p.cube[m] = cube;
    }
    return p;
}

std::vector<std::pair<int, int>> complement(const DGAlgebra& a, const Powers& p)
{
    std::vector<std::pair<int, int>> v;
    for (int n : p.degrees) {
        Echelon e = *p.sq.at(n);
        for (int i : reduced_basis(a, n))
            if (e.insert(SVec::unit(i, a.field().one())))
                v.emplace_back(n, i);
    }
    return v;
}

TwoHomogeneity homogeneity(const DGAlgebra& a, const Powers& p, const std::vector<std::pair<int, int>>& v)
{
    const Field& f = a.field();
    TwoHomogeneity t;
    t.checked_lo = p.degrees.empty() ? 0 : p.degrees.front();
    t.checked_hi = p.degrees.empty() ? -1 : p.degrees.back();
    for (int m : p.degrees) {
        Echelon vsq(f);
        for (const auto& [i, x] : v)
            for (const auto& [j, y] : v)
                if (i + j == m)
                    vsq.insert(a.product(i, x, j, y));
        Echelon both = vsq;
        for (const SVec& c : p.cube.at(m)->basis())
            both.insert(c);
        int r2 = p.sq.at(m)->rank();
        if (vsq.rank() + p.cube.at(m)->rank() != r2 || both.rank() != r2) {
            t.ok = false;
            t.failure = m;
            return t;
        }
    }
    return t;
}

std::string generator_label(const std::string& label)
{
    std::string r;
    for (char ch : label)
        r += std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ? ch : '_';
    return r + "'";
}

// integer multiples with the same span: signed residues mod p, cleared denominators over Q
std::vector<long> integer_coefficients(const SVec& v, const Field& f)
{
    std::vector<long> r;
    if (f.kind() == Field::Kind::prime) {
        std::int64_t p = f.characteristic();
        for (const auto& [i, c] : v)
            r.push_back(static_cast<long>(c.residue() > p / 2 ? c.residue() - p : c.residue()));
        return r;
    }
    boost::multiprecision::cpp_int den = 1;
    for (const auto& [i, c] : v)
        den = boost::integer::lcm(den, boost::multiprecision::denominator(c.rational()));
    for (const auto& [i, c] : v) {
        Rational q = c.rational() * den;
        r.push_back(static_cast<long>(boost::multiprecision::numerator(q)));
    }
    return r;
}

// words over the V letters (degrees |v|+1) of total degree n
void words_of_degree(const std::vector<int>& letter_deg, int n, Word& prefix, std::vector<Word>& out)
{
    if (n == 0) {
        if (!prefix.empty())
            out.push_back(prefix);
        return;
    }
    for (int x = 0; x < static_cast<int>(letter_deg.size()); ++x) {
        int d = letter_deg[static_cast<std::size_t>(x)];
        if ((n > 0) != (d > 0) || std::abs(d) > std::abs(n))
            continue;
        prefix.push_back(x);
        words_of_degree(letter_deg, n - d, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

TwoHomogeneity two_homogeneous_check(const DGAlgebra& a)
{
    require_quadratic_setting(a);
    Powers p = ideal_powers(a);
    return homogeneity(a, p, complement(a, p));
}

QuadraticData quadratic_dual(const AlgebraP& a, int cutoff)
{
    require_quadratic_setting(*a);
    const Field& f = a->field();
    QuadraticData q;
    q.a = a;
    q.cutoff = cutoff;
    Powers p = ideal_powers(*a);
    q.v = complement(*a, p);
    q.two_homogeneous = homogeneity(*a, p, q.v);
    if (!q.two_homogeneous.ok)
        fail("algebra is not two-homogeneous (degree " + std::to_string(*q.two_homogeneous.failure) +
             "): the quadratic dual is undefined");

    Presentation& pres = q.shriek_presentation;
    pres.polarity = flipped(a->polarity);
    pres.cutoff = cutoff;
    for (const auto& [n, i] : q.v)
        pres.gens.emplace_back(generator_label(a->space()->labels(n)[static_cast<std::size_t>(i)]), -(n + 1));

    int nv = static_cast<int>(q.v.size());
    for (int m : p.degrees) {
        std::vector<std::pair<int, int>> cols;
        for (int x = 0; x < nv; ++x)
            for (int y = 0; y < nv; ++y)
                if (q.v[static_cast<std::size_t>(x)].first + q.v[static_cast<std::size_t>(y)].first == m)
                    cols.emplace_back(x, y);
        if (cols.empty())
            continue;
        Mat phi(a->space()->dim(m), static_cast<int>(cols.size()));
        for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            auto [x, y] = cols[static_cast<std::size_t>(c)];
            auto [i, xi] = q.v[static_cast<std::size_t>(x)];
            auto [j, yi] = q.v[static_cast<std::size_t>(y)];
            SVec prod = p.cube.at(m)->normal_form(a->product(i, xi, j, yi));
            phi.set_col(c, prod.scaled(parity_sign(f, i)));
        }
        // Im phi* is spanned by the rows of phi, as functionals on W|W;
        // varpi^-1 turns f into sum f(sv|sv') (-1)^{|sv||sv'|} xi xi'
        Echelon rows(f);
        Mat rt = phi.transposed();
        for (int r = 0; r < rt.cols(); ++r)
            rows.insert(rt.col(r));
        for (const SVec& row : rows.basis()) {
            VecBuilder signed_row;
            for (const auto& [c, val] : row) {
                auto [x, y] = cols[static_cast<std::size_t>(c)];
                long dx = q.v[static_cast<std::size_t>(x)].first + 1;
                long dy = q.v[static_cast<std::size_t>(y)].first + 1;
                signed_row.add(c, val * koszul_sign(f, dx, dy));
            }
            SVec sr = signed_row.build();
            std::vector<long> coefs = integer_coefficients(sr, f);
            Poly rel;
            std::size_t k = 0;
            for (const auto& [c, val] : sr) {
                auto [x, y] = cols[static_cast<std::size_t>(c)];
                rel.push_back({coefs[k++], {x, y}});
            }
            pres.rels.push_back(std::move(rel));
        }
        q.phi[m] = std::move(phi);
        q.phi_columns[m] = std::move(cols);
    }

    q.shriek = from_presentation(pres, f, cutoff);
    const Space& ss = *q.shriek->space();
    for (int n = ss.window().lo; n <= ss.window().hi; ++n)
        q.shriek_ranks[n] = ss.dim(n);
    return q;
}

PriddyData priddy(const AlgebraP& a, int cutoff)
{
    require_quadratic_setting(*a);
    PriddyData pd;
    pd.bar = bar(a, cutoff);
    pd.quad = quadratic_dual(a, pd.bar.cutoff);
    const DGAlgebra& shriek = *pd.quad.shriek;
    const Field& f = a->field();
    pd.coalg = dual_coalgebra(pd.quad.shriek);

    std::vector<int> letter_deg;
    for (const auto& [n, i] : pd.quad.v)
        letter_deg.push_back(n + 1);
    const WordBasis& bw = *pd.bar.coalg->words;
    const SpaceP& src = pd.coalg->space();
    const SpaceP& tgt = pd.bar.coalg->space();

    // iota = ev^-1 q*, with q: (T^c W)* -> A^! the projection sending the word
    // dual to w1..wp to eps(w) xi_w1 ... xi_wp
    pd.inclusion = GMap(src, tgt, 0);
    for (int n : pd.inclusion.domain()) {
        if (!src->dim(n) && !tgt->dim(n))
            continue;
        Mat m(tgt->dim(n), src->dim(n));
        if (src->dim(n)) {
            std::vector<Word> ws;
            Word prefix;
            words_of_degree(letter_deg, n, prefix, ws);
            if (n == 0)
                ws.push_back({});
            for (const Word& w : ws) {
                SVec val = shriek.unit_vec();
                int deg = 0;
                bool odd = false;
                for (int x : w) {
                    int d = -letter_deg[static_cast<std::size_t>(x)];
                    odd ^= odd_product(deg, d);
                    val = shriek.product(deg, val, d, shriek.words->letter_vec[static_cast<std::size_t>(x)]);
                    deg += d;
                }
                Word bword;
                for (int x : w)
                    bword.push_back(pd.bar.letter_of.at(pd.quad.v[static_cast<std::size_t>(x)]));
                auto row = bw.index_of(n, bword);
                if (!row)
                    fail("internal error: bar word missing for a quadratic word");
                Scalar s = f.sign(odd != ((n & 1) != 0));
                for (const auto& [k, c] : val)
                    m.add(*row, k, c * s);
            }
        }
        pd.inclusion.set(n, std::move(m));
    }
    check_coalgebra_morphism(pd.inclusion, *pd.coalg, *pd.bar.coalg);
    pd.tau = make_twisting(pd.coalg, a, compose(pd.bar.tau.map, pd.inclusion));
    return pd;
}

KoszulCertificate koszul_check(const AlgebraP& a, int cutoff)
{
    KoszulCertificate k;
    k.cutoff = cutoff;
    k.two_homogeneous = two_homogeneous_check(*a);
    if (!k.two_homogeneous.ok) {
        k.first_failure = k.two_homogeneous.failure;
        return k;
    }
    PriddyData pd = priddy(a, cutoff);
    k.shriek_ranks = pd.quad.shriek_ranks;
    k.acyclic = acyclic_check(pd.tau, cutoff);

    Homology hb(pd.bar.coalg->cx);
    int sgn = a->polarity == Polarity::p ? 1 : -1;
    for (int m = 0; m <= cutoff - 1; ++m) {
        int n = sgn * m;
        const Space& c = *pd.coalg->space();
        if (!hb.certified(n) || !c.determined(n))
            continue;
        k.bar_ranks[n] = hb.rank(n);
        k.priddy_ranks[n] = c.dim(n);
        if (!k.rank_failure && k.bar_ranks[n] != k.priddy_ranks[n])
            k.rank_failure = n;
    }
    k.koszul = k.acyclic.acyclic && !k.rank_failure;
    if (!k.koszul)
        k.first_failure = k.rank_failure ? k.rank_failure : k.acyclic.witness;
    return k;
}

KoszulConstruction koszul_construction(const AlgebraP& a, int cutoff)
{
    KoszulConstruction kc;
    kc.priddy = priddy(a, cutoff);
    const PriddyData& pd = kc.priddy;
    AlgebraP dstar = dual_algebra(pd.coalg);
    kc.ring = tensor_product(a, dstar);
    const Space& rs = *kc.ring->space();

    // xi_i is dual to sv_i, whose image in B(A) is [v_i]
    VecBuilder d;
    const GMap& iota = pd.inclusion;
    for (const auto& [n, i] : pd.quad.v) {
        int wdeg = n + 1;
        int letter = pd.bar.letter_of.at({n, i});
        int row = *pd.bar.coalg->words->index_of(wdeg, {letter});
        Mat blk = iota.block(wdeg);
        std::optional<int> col;
        Scalar val;
        for (int c = 0; c < blk.cols(); ++c) {
            Scalar x = blk.at(row, c);
            if (!x.is_zero()) {
                if (col || blk.col(c).size() != 1)
                    fail("internal error: length-one words are not a basis part of A^<");
                col = c;
                val = x;
            }
        }
        if (!col)
            fail("internal error: generator missing from A^<");
        d.add(rs.tensor_index(-1, n, i, *col), val);
    }
    kc.d = d.build();
    kc.d_squared_zero = kc.ring->product(-1, kc.d, -1, kc.d).empty();
    kc.module = twisted_free_left(pd.tau, *regular_comodule(pd.coalg, Side::left));
    return kc;
}

}  // namespace kd
