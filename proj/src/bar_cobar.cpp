#include "kd/bar_cobar.hpp"

#include <stdexcept>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw StructuralError(what); }

std::string bracket(const WordBasis& wb, const Word& w) { return "[" + wb.label(w, "|", "") + "]"; }

// Replace the word labels of a tensor algebra by bracket notation.
AlgebraP relabel_brackets(const DGAlgebra& a)
{
    const Space& s = *a.space();
    Basis b;
    for (const auto& [n, ws] : a.words->words) {
        std::vector<std::string> labels;
        for (const auto& w : ws)
            labels.push_back(bracket(*a.words, w));
        b.emplace(n, std::move(labels));
    }
    SpaceP t = make_space(s.field(), s.window(), std::move(b));
    DGAlgebra r = a;
    r.cx = {t, restrict_map(a.cx.d, t, t)};
    r.mul = restrict_map(a.mul, tensor_space(t, t), t);
    return make_algebra(std::move(r));
}

void post_check(bool ok, const std::string& what)
{
    if (!ok)
        throw std::logic_error("internal sign error: " + what);
}

}  // namespace

BarConstruction bar(const AlgebraP& a, int cutoff)
{
    if (!a->augmented)
        fail("bar construction needs an augmented algebra");
    if (a->polarity == Polarity::none)
        fail("polarity violation: bar construction needs polarity p or n (word count per degree would diverge)");
    const Space& as = *a->space();
    const Field& f = a->field();
    const Window& aw = as.window();
    if (a->polarity == Polarity::p && !aw.above)
        cutoff = std::min(cutoff, aw.hi + 1);
    if (a->polarity == Polarity::n && !aw.below)
        cutoff = std::min(cutoff, -aw.lo - 1);

    BarConstruction b;
    b.source = a;
    b.cutoff = cutoff;
    std::vector<std::pair<std::string, int>> letters;
    for (int n : as.degrees()) {
        if (std::abs(n + 1) > cutoff)
            continue;
        for (int i = 0; i < as.dim(n); ++i) {
            if (a->is_unit(n, i))
                continue;
            b.letter_of[{n, i}] = static_cast<int>(letters.size());
            b.letter_src.emplace_back(n, i);
            letters.emplace_back(as.labels(n)[static_cast<std::size_t>(i)], n + 1);
        }
    }
    auto tc = tensor_coalgebra(f, letters, cutoff);
    const WordBasis& wb = *tc->words;
    const SpaceP& s = tc->space();

    // corestriction of the differential: [a] -> -[da], [a1|a2] -> (-1)^{|a1|+1} [a1 a2]
    GMap q(s, s, -1);
    auto letter_word = [&](int n, int j) { return *wb.index_of(n + 1, {b.letter_of.at({n, j})}); };
    for (int n : q.domain()) {
        if (!s->dim(n))
            continue;
        Mat m(s->dim(n - 1), s->dim(n));
        const auto& ws = wb.words.at(n);
        for (int c = 0; c < s->dim(n); ++c) {
            const Word& w = ws[static_cast<std::size_t>(c)];
            VecBuilder col;
            if (w.size() == 1) {
                auto [d, i] = b.letter_src[static_cast<std::size_t>(w[0])];
                for (const auto& [j, v] : a->cx.d.apply(d, SVec::unit(i, f.one())))
                    if (!a->is_unit(d - 1, j))
                        col.add(letter_word(d - 1, j), -v);
            } else if (w.size() == 2) {
                auto [d1, i1] = b.letter_src[static_cast<std::size_t>(w[0])];
                auto [d2, i2] = b.letter_src[static_cast<std::size_t>(w[1])];
                Scalar sg = parity_sign(f, d1 + 1);
                for (const auto& [j, v] : a->product(d1, i1, d2, i2))
                    if (!a->is_unit(d1 + d2, j))
                        col.add(letter_word(d1 + d2, j), sg * v);
            }
            m.set_col(c, col.build());
        }
        q.set(n, std::move(m));
    }
    DGCoalgebra bc = *tc;
    bc.cx = complex_with(s, coderivation_extend(*tc, q));
    b.coalg = make_coalgebra(std::move(bc));

    GMap tau(s, a->space(), -1);
    for (int n : tau.domain()) {
        if (!s->dim(n) || !as.dim(n - 1))
            continue;
        Mat m(as.dim(n - 1), s->dim(n));
        const auto& ws = wb.words.at(n);
        for (int c = 0; c < s->dim(n); ++c)
            if (ws[static_cast<std::size_t>(c)].size() == 1)
                m.add(b.letter_src[static_cast<std::size_t>(ws[static_cast<std::size_t>(c)][0])].second, c, f.one());
        tau.set(n, std::move(m));
    }
    b.tau = make_twisting(b.coalg, a, std::move(tau));
    return b;
}

CobarConstruction cobar(const CoalgebraP& c, int cutoff)
{
    if (!c->coaugmented)
        fail("cobar construction needs a coaugmented coalgebra");
    if (c->polarity == Polarity::none)
        fail("polarity violation: cobar construction needs polarity p or n (word count per degree would diverge)");
    const Space& cs = *c->space();
    const Field& f = c->field();
    const Window& cw = cs.window();
    if (c->polarity == Polarity::p && !cw.above)
        cutoff = std::min(cutoff, cw.hi - 1);
    if (c->polarity == Polarity::n && !cw.below)
        cutoff = std::min(cutoff, 1 - cw.lo);

    CobarConstruction w;
    w.source = c;
    w.cutoff = cutoff;
    Basis vb;
    int lo = 0, hi = 0;
    for (int n : cs.degrees()) {
        if (std::abs(n - 1) > cutoff)
            continue;
        for (int i = 0; i < cs.dim(n); ++i) {
            if (c->is_unit(n, i))
                continue;
            w.letter_of[{n, i}] = static_cast<int>(w.letter_src.size());
            w.letter_src.emplace_back(n, i);
            vb[n - 1].push_back(cs.labels(n)[static_cast<std::size_t>(i)]);
            lo = std::min(lo, n - 1);
            hi = std::max(hi, n - 1);
        }
    }
    SpaceP v = make_space(f, Window::finite(lo, hi), vb);
    auto ta = tensor_algebra(v, cutoff);
    const WordBasis& wb = *ta->words;
    const Space& ts = *ta->space();
    const Space& cc = *c->cop.tgt();

    // d[c] = sum (-1)^{|c_i|} [c_i|c'_i] - [dc]
    std::vector<SVec> images;
    for (const auto& [n, i] : w.letter_src) {
        int target = n - 2;
        VecBuilder img;
        if (ts.known(target)) {
            for (const auto& [idx, x] : c->coproduct(n, SVec::unit(i, f.one()))) {
                auto [ld, l, r] = cc.tensor_split(n, idx);
                if (c->is_unit(ld, l) || c->is_unit(n - ld, r))
                    continue;
                Word word{w.letter_of.at({ld, l}), w.letter_of.at({n - ld, r})};
                img.add(*wb.index_of(target, word), parity_sign(f, ld) * x);
            }
            for (const auto& [j, x] : c->cx.d.apply(n, SVec::unit(i, f.one())))
                if (!c->is_unit(n - 1, j))
                    img.add(*wb.index_of(target, {w.letter_of.at({n - 1, j})}), -x);
        }
        images.push_back(img.build());
    }
    DGAlgebra o = *ta;
    o.cx = complex_with(ta->space(), derivation_extend(*ta, images, -1));
    w.alg = relabel_brackets(o);

    GMap tau(c->space(), w.alg->space(), -1);
    for (int n : tau.domain()) {
        if (!cs.dim(n) || !w.alg->space()->dim(n - 1))
            continue;
        Mat m(w.alg->space()->dim(n - 1), cs.dim(n));
        for (int i = 0; i < cs.dim(n); ++i)
            if (auto it = w.letter_of.find({n, i}); it != w.letter_of.end())
                m.set_col(i, wb.letter_vec[static_cast<std::size_t>(it->second)]);
        tau.set(n, std::move(m));
    }
    w.tau = make_twisting(c, w.alg, std::move(tau));
    return w;
}

GMap gamma_tau(const TwistingMap& t, const BarConstruction& b)
{
    auto cc = cocomplete_check(*t.c);
    if (!cc.cocomplete)
        fail("gamma^tau needs a cocomplete coalgebra; psi-bar iterates do not vanish in degree " +
             std::to_string(cc.witness_degree.value_or(0)));
    const Field& f = t.c->field();
    const WordBasis& wb = *b.coalg->words;
    const SpaceP& bs = b.coalg->space();
    GMap s_tau(t.c->space(), bs, 0);
    for (int n : s_tau.domain()) {
        if (!t.c->space()->dim(n))
            continue;
        if (!bs->known(n)) {
            s_tau.undefine(n);
            continue;
        }
        Mat m(bs->dim(n), t.c->space()->dim(n));
        for (int i = 0; i < t.c->space()->dim(n); ++i) {
            VecBuilder col;
            for (const auto& [j, x] : t.map.apply(n, SVec::unit(i, f.one())))
                col.add(*wb.index_of(n, {b.letter_of.at({n - 1, j})}), x);
            m.set_col(i, col.build());
        }
        s_tau.set(n, std::move(m));
    }
    GMap g = corestriction_lift(*t.c, *b.coalg, s_tau);
    try {
        check_coalgebra_morphism(g, *t.c, *b.coalg);
    } catch (const StructuralError& e) {
        post_check(false, std::string("gamma^tau: ") + e.what());
    }
    post_check(!first_difference(compose(b.tau.map, g), t.map), "tau^A gamma^tau differs from tau");
    return g;
}

GMap alpha_tau(const TwistingMap& t, const CobarConstruction& w)
{
    const Field& f = t.c->field();
    std::vector<SVec> images;
    for (const auto& [n, i] : w.letter_src)
        images.push_back(t.map.apply(n, SVec::unit(i, f.one())));
    GMap a = extend_multiplicatively(*w.alg, *t.a, images);
    try {
        check_algebra_morphism(a, *w.alg, *t.a);
    } catch (const StructuralError& e) {
        post_check(false, std::string("alpha^tau: ") + e.what());
    }
    post_check(!first_difference(compose(a, w.tau.map), t.map), "alpha^tau tau^C differs from tau");
    return a;
}

ComparisonMorphism bar_cobar_counit(const BarConstruction& b, const CobarConstruction& ob)
{
    if (ob.source != b.coalg)
        fail("counit needs the cobar construction of this bar construction");
    ComparisonMorphism r;
    r.map = alpha_tau(b.tau, ob);
    r.src = ob.alg->cx;
    r.tgt = b.source->cx;
    r.verdict = quasi_iso_check(r.map, r.src, r.tgt);
    return r;
}

ComparisonMorphism cobar_bar_unit(const CobarConstruction& w, const BarConstruction& bw)
{
    if (bw.source != w.alg)
        fail("unit needs the bar construction of this cobar construction");
    ComparisonMorphism r;
    r.map = gamma_tau(w.tau, bw);
    r.src = w.source->cx;
    r.tgt = bw.coalg->cx;
    r.verdict = quasi_iso_check(r.map, r.src, r.tgt);
    return r;
}

ComparisonMorphism bar_functor(const GMap& alpha, const BarConstruction& src, const BarConstruction& tgt)
{
    check_algebra_morphism(alpha, *src.source, *tgt.source);
    TwistingMap t = make_twisting(src.coalg, tgt.source, compose(alpha, src.tau.map));
    ComparisonMorphism r;
    r.map = gamma_tau(t, tgt);
    r.src = src.coalg->cx;
    r.tgt = tgt.coalg->cx;
    r.verdict = quasi_iso_check(r.map, r.src, r.tgt);
    return r;
}

bool cobar_quasi_iso_hypotheses(const DGCoalgebra& c, const DGCoalgebra& d)
{
    auto reduced_vanishes = [](const DGCoalgebra& x, long lo, long hi) {
        const Space& s = *x.space();
        auto mn = s.min_possible(), mx = s.max_possible();
        if (!mn)
            return true;
        long a = std::max(lo, *mn), b = std::min(hi, *mx);
        if (a > b)
            return true;
        if (a <= -kInf || b >= kInf)
            return false;
        for (long n = a; n <= b; ++n) {
            int d = static_cast<int>(n);
            if (!s.determined(d) || s.dim(d) - (d == 0 && x.coaugmented ? 1 : 0) != 0)
                return false;
        }
        return true;
    };
    bool p = reduced_vanishes(c, -kInf, 1) && reduced_vanishes(d, -kInf, 1);
    bool n = reduced_vanishes(c, 0, kInf) && reduced_vanishes(d, 0, kInf);
    return p || n;
}

ComparisonMorphism cobar_functor(const GMap& gamma, const CobarConstruction& src, const CobarConstruction& tgt)
{
    check_coalgebra_morphism(gamma, *src.source, *tgt.source);
    TwistingMap t = make_twisting(src.source, tgt.alg, compose(tgt.tau.map, gamma));
    ComparisonMorphism r;
    r.map = alpha_tau(t, src);
    r.src = src.alg->cx;
    r.tgt = tgt.alg->cx;
    r.verdict = quasi_iso_check(r.map, r.src, r.tgt);
    r.hypotheses = cobar_quasi_iso_hypotheses(*src.source, *tgt.source);
    return r;
}

}  // namespace kd
