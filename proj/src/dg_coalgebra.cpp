#include "kd/dg_coalgebra.hpp"

#include <algorithm>
#include <functional>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw StructuralError(what); }

std::string basis_name(const Space& s, int n, int i) { return s.labels(n)[static_cast<std::size_t>(i)]; }

std::optional<std::pair<int, int>> first_column_difference(const GMap& f, const GMap& g)
{
    if (auto n = first_difference(f, g)) {
        Mat l = f.block(*n), r = g.block(*n);
        for (int c = 0; c < l.cols(); ++c)
            if (l.col(c) != r.col(c))
                return std::make_pair(*n, c);
    }
    return std::nullopt;
}

}  // namespace

void check_coalgebra(const DGCoalgebra& c)
{
    const Space& s = *c.space();
    const Field& f = c.field();
    if (s.dim(0) <= c.unit)
        fail("coaugmentation is not a basis vector of degree 0");
    check_d2(c.cx);
    const Space& cc = *c.cop.tgt();

    // counit laws: (e|1) psi = id = (1|e) psi
    for (int n : s.degrees()) {
        if (!c.cop.defined(n))
            continue;
        for (int i = 0; i < s.dim(n); ++i) {
            SVec e = SVec::unit(i, f.one());
            SVec psi = c.coproduct(n, e);
            VecBuilder left, right;
            for (const auto& [idx, x] : psi) {
                auto [ld, a, b] = cc.tensor_split(n, idx);
                if (c.is_unit(ld, a))
                    left.add(b, x);
                if (c.is_unit(n - ld, b))
                    right.add(a, x);
            }
            if (left.build() != e || right.build() != e)
                fail("counit law fails on " + basis_name(s, n, i));
        }
    }

    // coassociativity: (psi|1) psi = assoc_inv (1|psi) psi
    GMap id = identity_map(c.space());
    GMap lhs = compose(tensor_map(c.cop, id, c.cop.tgt()), c.cop);
    GMap r1 = compose(tensor_map(id, c.cop, c.cop.tgt()), c.cop);
    GMap rhs = compose(assoc_inv(r1.tgt()), r1);
    rhs = restrict_map(rhs, c.space(), lhs.tgt());
    if (auto w = first_column_difference(lhs, rhs))
        fail("coassociativity fails on " + basis_name(s, w->first, w->second));

    Complex tc{c.cop.tgt(), tensor_differential(c.cx, c.cx, c.cop.tgt())};
    if (auto n = chain_map_defect(c.cop, c.cx, tc))
        fail("coproduct is not a chain map in degree " + std::to_string(*n));

    if (c.coaugmented) {
        if (!c.cx.d.apply(0, c.unit_vec()).empty())
            fail("coaugmentation: the unit is not a cycle");
        if (c.cx.d.defined(1)) {
            Mat d1 = c.cx.d.block(1);
            for (int i = 0; i < d1.cols(); ++i)
                if (!d1.col(i).get(c.unit).is_zero())
                    fail("counit is not a chain map: d(" + basis_name(s, 1, i) + ") hits the unit");
        }
        SVec one_one = SVec::unit(cc.tensor_index(0, 0, c.unit, c.unit), f.one());
        if (c.coproduct(0, c.unit_vec()) != one_one)
            fail("coaugmentation is not group-like");
        for (int i = 0; i < s.dim(0); ++i) {
            if (i == c.unit)
                continue;
            if (!c.coproduct(0, SVec::unit(i, f.one())).get(one_one.top()).is_zero())
                fail("counit is not comultiplicative on " + basis_name(s, 0, i));
        }
    }

    if (c.polarity == Polarity::p) {
        if (s.dim(0) != 1 || s.dim(1) != 0)
            fail("coalgebra polarity p violated in degrees 0, 1");
        for (int n = s.window().lo; n < 0; ++n)
            if (s.dim(n))
                fail("coalgebra polarity p violated in degree " + std::to_string(n));
    } else if (c.polarity == Polarity::n) {
        if (s.dim(0) != 1)
            fail("coalgebra polarity n violated in degree 0");
        for (int n = 1; n <= s.window().hi; ++n)
            if (s.dim(n))
                fail("coalgebra polarity n violated in degree " + std::to_string(n));
    }
}

CoalgebraP make_coalgebra(DGCoalgebra c)
{
    check_coalgebra(c);
    return std::make_shared<const DGCoalgebra>(std::move(c));
}

GMap counit_map(const DGCoalgebra& c)
{
    GMap e(c.space(), ground_space(c.field()), 0);
    if (e.defined(0)) {
        Mat m(1, c.space()->dim(0));
        m.add(0, c.unit, c.field().one());
        e.set(0, m);
    }
    return e;
}

GMap coaugmentation_map(const DGCoalgebra& c)
{
    GMap u(ground_space(c.field()), c.space(), 0);
    Mat m(c.space()->dim(0), 1);
    m.set_col(0, c.unit_vec());
    u.set(0, m);
    return u;
}

// ---------------------------------------------------------------- comodules

void check_comodule(const DGComodule& x)
{
    const DGCoalgebra& c = *x.coalg;
    const Space& s = *x.space();
    const Field& f = x.field();
    check_d2(x.cx);
    const Space& t = *x.coact.tgt();
    for (int n : s.degrees()) {
        if (!x.coact.defined(n))
            continue;
        for (int i = 0; i < s.dim(n); ++i) {
            SVec e = SVec::unit(i, f.one());
            VecBuilder back;
            for (const auto& [idx, v] : x.coact.apply(n, e)) {
                auto [ld, a, b] = t.tensor_split(n, idx);
                if (x.side == Side::left && c.is_unit(ld, a))
                    back.add(b, v);
                if (x.side == Side::right && c.is_unit(n - ld, b))
                    back.add(a, v);
            }
            if (back.build() != e)
                fail("comodule counit law fails on " + basis_name(s, n, i));
        }
    }
    GMap idx = identity_map(x.space()), idc = identity_map(c.space());
    GMap lhs, rhs;
    if (x.side == Side::left) {
        // (psi|1) coact = assoc_inv (1|coact) coact
        lhs = compose(tensor_map(c.cop, idx, x.coact.tgt()), x.coact);
        GMap r1 = compose(tensor_map(idc, x.coact, x.coact.tgt()), x.coact);
        rhs = restrict_map(compose(assoc_inv(r1.tgt()), r1), x.space(), lhs.tgt());
    } else {
        // (coact|1) coact = assoc_inv (1|psi) coact
        lhs = compose(tensor_map(x.coact, idc, x.coact.tgt()), x.coact);
        GMap r1 = compose(tensor_map(idx, c.cop, x.coact.tgt()), x.coact);
        rhs = restrict_map(compose(assoc_inv(r1.tgt()), r1), x.space(), lhs.tgt());
    }
    if (auto w = first_column_difference(lhs, rhs))
        fail("comodule coassociativity fails on " + basis_name(s, w->first, w->second));
    Complex tc = x.side == Side::left
                     ? Complex{x.coact.tgt(), tensor_differential(c.cx, x.cx, x.coact.tgt())}
                     : Complex{x.coact.tgt(), tensor_differential(x.cx, c.cx, x.coact.tgt())};
    if (auto n = chain_map_defect(x.coact, x.cx, tc))
        fail("coaction is not a chain map in degree " + std::to_string(*n));
}

ComoduleP make_comodule(DGComodule x)
{
    check_comodule(x);
    return std::make_shared<const DGComodule>(std::move(x));
}

ComoduleP regular_comodule(const CoalgebraP& c, Side side)
{
    return make_comodule({c, side, c->cx, c->cop});
}

ComoduleP trivial_comodule(const CoalgebraP& c, Side side)
{
    if (!c->coaugmented)
        fail("trivial comodule needs a coaugmented coalgebra");
    SpaceP k = ground_space(c->field());
    SpaceP t = side == Side::left ? tensor_space(c->space(), k) : tensor_space(k, c->space());
    GMap co(k, t, 0);
    Mat m(t->dim(0), 1);
    int idx = side == Side::left ? t->tensor_index(0, 0, c->unit, 0) : t->tensor_index(0, 0, 0, c->unit);
    m.add(idx, 0, c->field().one());
    co.set(0, m);
    return make_comodule({c, side, zero_complex(k), co});
}

ComoduleP cofree_comodule(const CoalgebraP& c, const Complex& v, Side side)
{
    if (side == Side::left) {
        Complex x = tensor(c->cx, v);
        GMap step = tensor_map(c->cop, identity_map(v.space), x.space);
        GMap co = compose(assoc(step.tgt()), step);
        return make_comodule({c, side, x, restrict_map(co, x.space, tensor_space(c->space(), x.space))});
    }
    Complex y = tensor(v, c->cx);
    GMap step = tensor_map(identity_map(v.space), c->cop, y.space);
    GMap co = compose(assoc_inv(step.tgt()), step);
    return make_comodule({c, side, y, restrict_map(co, y.space, tensor_space(y.space, c->space()))});
}

// ---------------------------------------------------------------- reduced coproduct

SpaceP reduced_space(const DGCoalgebra& c)
{
    const Space& s = *c.space();
    Basis b;
    for (int n : s.degrees()) {
        std::vector<std::string> l;
        for (int i = 0; i < s.dim(n); ++i)
            if (!c.is_unit(n, i))
                l.push_back(basis_name(s, n, i));
        if (!l.empty())
            b.emplace(n, std::move(l));
    }
    return make_space(c.field(), s.window(), std::move(b));
}

namespace {

int to_full(const DGCoalgebra& c, int n, int i) { return (n == 0 && i >= c.unit) ? i + 1 : i; }
int to_bar(const DGCoalgebra& c, int n, int i) { return (n == 0 && i > c.unit) ? i - 1 : i; }

}  // namespace

GMap reduced_inclusion(const DGCoalgebra& c, const SpaceP& cbar)
{
    GMap g(cbar, c.space(), 0);
    const Field& f = c.field();
    for (int n : g.domain()) {
        Mat m(c.space()->dim(n), cbar->dim(n));
        for (int i = 0; i < cbar->dim(n); ++i)
            m.set_col(i, SVec::unit(to_full(c, n, i), f.one()));
        g.set(n, std::move(m));
    }
    return g;
}

GMap reduced_projection(const DGCoalgebra& c, const SpaceP& cbar)
{
    GMap g(c.space(), cbar, 0);
    const Field& f = c.field();
    for (int n : g.domain()) {
        Mat m(cbar->dim(n), c.space()->dim(n));
        for (int i = 0; i < c.space()->dim(n); ++i)
            if (!c.is_unit(n, i))
                m.set_col(i, SVec::unit(to_bar(c, n, i), f.one()));
        g.set(n, std::move(m));
    }
    return g;
}

GMap reduced_coproduct(const DGCoalgebra& c, const SpaceP& cbar)
{
    if (!c.coaugmented)
        fail("reduced coproduct needs a coaugmented coalgebra");
    SpaceP bb = tensor_space(cbar, cbar);
    const Space& cc = *c.cop.tgt();
    GMap r(cbar, bb, 0);
    for (int n : r.domain()) {
        if (cbar->dim(n) == 0)
            continue;
        if (!c.cop.defined(n)) {
            r.undefine(n);
            continue;
        }
        Mat m(bb->dim(n), cbar->dim(n));
        for (int i = 0; i < cbar->dim(n); ++i) {
            VecBuilder col;
            for (const auto& [idx, x] : c.coproduct(n, SVec::unit(to_full(c, n, i), c.field().one()))) {
                auto [ld, a, b] = cc.tensor_split(n, idx);
                if (c.is_unit(ld, a) || c.is_unit(n - ld, b))
                    continue;
                col.add(bb->tensor_index(n, ld, to_bar(c, ld, a), to_bar(c, n - ld, b)), x);
            }
            m.set_col(i, col.build());
        }
        r.set(n, std::move(m));
    }
    return r;
}

GMap psi_iter(const DGCoalgebra& c, const SpaceP& cbar, int p)
{
    if (p < 1)
        fail("psi_iter needs p >= 1");
    if (p == 1)
        return identity_map(cbar);
    GMap prev = psi_iter(c, cbar, p - 1);
    GMap bar = reduced_coproduct(c, cbar);
    GMap step = tensor_map(prev, identity_map(cbar), bar.tgt());
    return compose(step, bar);
}

CocompleteVerdict cocomplete_check(const DGCoalgebra& c, int max_depth)
{
    CocompleteVerdict v;
    SpaceP cbar = reduced_space(c);
    if (c.polarity == Polarity::p || c.polarity == Polarity::n) {
        // C-bar sits in degrees >= 2 (or <= -1): psi-bar^(p) vanishes on degree n once p > |n|
        check_coalgebra(c);
        v.by_polarity = true;
    }
    std::map<int, bool> done;
    for (int n : cbar->degrees())
        done[n] = cbar->dim(n) == 0 || !c.space()->known(n);
    GMap it = identity_map(cbar);
    GMap bar = reduced_coproduct(c, cbar);
    for (int p = 1; p <= max_depth; ++p) {
        v.depth = p;
        bool all = true;
        for (auto& [n, ok] : done) {
            if (ok)
                continue;
            if (it.defined(n) && it.block(n).is_zero())
                ok = true;
            else
                all = false;
        }
        if (all)
            return v;
        GMap step = tensor_map(it, identity_map(cbar), bar.tgt());
        it = compose(step, bar);
    }
    for (const auto& [n, ok] : done)
        if (!ok) {
            v.cocomplete = false;
            v.witness_degree = n;
            break;
        }
    return v;
}

// ---------------------------------------------------------------- tensor coalgebras

namespace {

bool deglex_less(const Word& a, const Word& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

}  // namespace

CoalgebraP tensor_coalgebra(const Field& f, const std::vector<std::pair<std::string, int>>& letters, int cutoff)
{
    int sgn = 1;
    if (!letters.empty())
        sgn = letters.front().second > 0 ? 1 : -1;
    for (const auto& [l, d] : letters) {
        if (d == 0)
            fail("tensor coalgebra on the degree 0 letter '" + l + "': word count per degree would be infinite");
        if ((d > 0) != (sgn > 0))
            fail("tensor coalgebra on letters of both signs");
    }
    auto wb = std::make_shared<WordBasis>();
    for (const auto& [l, d] : letters) {
        wb->letters.push_back(l);
        wb->letter_deg.push_back(d);
    }
    int top = letters.empty() ? 0 : cutoff;
    for (int m = 0; m <= top; ++m) {
        int n = sgn * m;
        std::vector<Word> ws;
        if (m == 0)
            ws.push_back({});
        for (std::size_t x = 0; x < letters.size() && m > 0; ++x) {
            auto it = wb->words.find(n - letters[x].second);
            if (it == wb->words.end())
                continue;
            for (Word w : it->second) {
                w.push_back(static_cast<int>(x));
                ws.push_back(std::move(w));
            }
        }
        std::sort(ws.begin(), ws.end(), deglex_less);
        if (!ws.empty())
            wb->words.emplace(n, std::move(ws));
    }
    wb->build_index();
    Basis basis;
    for (const auto& [n, ws] : wb->words) {
        std::vector<std::string> labels;
        for (const auto& w : ws)
            labels.push_back("[" + wb->label(w, "|", "") + "]");
        basis.emplace(n, std::move(labels));
    }
    Window win = letters.empty() ? Window::finite(0, 0)
                                 : (sgn > 0 ? Window::bounded_below(0, cutoff) : Window::bounded_above(-cutoff, 0));
    SpaceP space = make_space(f, win, std::move(basis));
    for (std::size_t x = 0; x < letters.size(); ++x) {
        auto idx = wb->index_of(letters[x].second, {static_cast<int>(x)});
        wb->letter_vec.push_back(idx ? SVec::unit(*idx, f.one()) : SVec{});
    }

    SpaceP cc = tensor_space(space, space);
    GMap cop(space, cc, 0);
    for (int n : cop.domain()) {
        if (space->dim(n) == 0)
            continue;
        Mat m(cc->dim(n), space->dim(n));
        const auto& ws = wb->words.at(n);
        for (int i = 0; i < space->dim(n); ++i) {
            const Word& w = ws[static_cast<std::size_t>(i)];
            VecBuilder col;
            int dl = 0;
            for (std::size_t j = 0; j <= w.size(); ++j) {
                Word l(w.begin(), w.begin() + static_cast<long>(j)), r(w.begin() + static_cast<long>(j), w.end());
                col.add(cc->tensor_index(n, dl, *wb->index_of(dl, l), *wb->index_of(n - dl, r)), f.one());
                if (j < w.size())
                    dl += wb->letter_deg[static_cast<std::size_t>(w[j])];
            }
            m.set_col(i, col.build());
        }
        cop.set(n, std::move(m));
    }
    DGCoalgebra c;
    c.cx = zero_complex(space);
    c.cop = std::move(cop);
    c.unit = 0;
    c.coaugmented = true;
    bool all_p = std::all_of(letters.begin(), letters.end(), [](const auto& l) { return l.second >= 2; });
    bool all_n = std::all_of(letters.begin(), letters.end(), [](const auto& l) { return l.second <= -1; });
    c.polarity = all_p ? Polarity::p : (all_n ? Polarity::n : Polarity::none);
    c.words = wb;
    return make_coalgebra(std::move(c));
}

CoalgebraP tensor_coalgebra(const SpaceP& v, int cutoff)
{
    std::vector<std::pair<std::string, int>> letters;
    for (int n : v->degrees())
        for (const auto& l : v->labels(n))
            letters.emplace_back(l, n);
    return tensor_coalgebra(v->field(), letters, cutoff);
}

GMap coderivation_extend(const DGCoalgebra& tc, const GMap& q)
{
    if (!tc.words)
        fail("coderivation needs a tensor coalgebra");
    const WordBasis& wb = *tc.words;
    const SpaceP& s = tc.space();
    const Field& f = tc.field();
    int deg = q.deg();
    GMap d(s, s, deg);
    for (int n : d.domain()) {
        if (s->dim(n) == 0)
            continue;
        if (!s->known(n + deg)) {
            d.undefine(n);
            continue;
        }
        Mat m(s->dim(n + deg), s->dim(n));
        const auto& ws = wb.words.at(n);
        for (int c = 0; c < s->dim(n); ++c) {
            const Word& w = ws[static_cast<std::size_t>(c)];
            VecBuilder col;
            int before = 0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                int sub_deg = 0;
                for (std::size_t j = i; j < w.size(); ++j) {
                    sub_deg += wb.letter_deg[static_cast<std::size_t>(w[j])];
                    Word sub(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(j) + 1);
                    SVec img = q.apply(sub_deg, SVec::unit(*wb.index_of(sub_deg, sub), f.one()));
                    for (const auto& [k, x] : img) {
                        const Word& letter = wb.words.at(sub_deg + deg)[static_cast<std::size_t>(k)];
                        if (letter.size() != 1)
                            fail("corestriction leaves word length one");
                        Word out(w.begin(), w.begin() + static_cast<long>(i));
                        out.push_back(letter.front());
                        out.insert(out.end(), w.begin() + static_cast<long>(j) + 1, w.end());
                        col.add(*wb.index_of(n + deg, out), koszul_sign(f, deg, before) * x);
                    }
                }
                before += wb.letter_deg[static_cast<std::size_t>(w[i])];
            }
            m.set_col(c, col.build());
        }
        d.set(n, std::move(m));
    }
    return d;
}

GMap corestriction_lift(const DGCoalgebra& c, const DGCoalgebra& tc, const GMap& f)
{
    if (f.deg() != 0)
        fail("corestriction lift needs a degree 0 map");
    if (!tc.words)
        fail("corestriction lift needs a tensor coalgebra target");
    const WordBasis& wb = *tc.words;
    const Field& fld = c.field();
    SpaceP cbar = reduced_space(c);
    GMap inc = reduced_inclusion(c, cbar);
    GMap bar = reduced_coproduct(c, cbar);
    const Space& bb = *bar.tgt();
    std::map<std::pair<int, int>, SVec> memo;
    std::function<SVec(int, int, int)> lift = [&](int n, int i, int depth) -> SVec {
        if (depth > 64)
            fail("corestriction lift does not terminate: coalgebra is not cocomplete");
        auto key = std::make_pair(n, i);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        SVec e = inc.apply(n, SVec::unit(i, fld.one()));
        VecBuilder out;
        out.add(f.apply(n, e), fld.one());
        for (const auto& [idx, x] : bar.apply(n, SVec::unit(i, fld.one()))) {
            auto [ld, a, b] = bb.tensor_split(n, idx);
            SVec head = f.apply(ld, inc.apply(ld, SVec::unit(a, fld.one())));
            if (head.empty())
                continue;
            SVec tail = lift(n - ld, b, depth + 1);
            for (const auto& [h, y] : head) {
                const Word& hw = wb.words.at(ld)[static_cast<std::size_t>(h)];
                for (const auto& [t, z] : tail) {
                    Word w = hw;
                    const Word& tw = wb.words.at(n - ld)[static_cast<std::size_t>(t)];
                    w.insert(w.end(), tw.begin(), tw.end());
                    out.add(*wb.index_of(n, w), x * y * z);
                }
            }
        }
        return memo[key] = out.build();
    };
    GMap g(c.space(), tc.space(), 0);
    for (int n : g.domain()) {
        if (c.space()->dim(n) == 0)
            continue;
        if (!tc.space()->known(n)) {
            g.undefine(n);
            continue;
        }
        Mat m(tc.space()->dim(n), c.space()->dim(n));
        for (int i = 0; i < c.space()->dim(n); ++i) {
            if (c.is_unit(n, i)) {
                m.set_col(i, tc.unit_vec());
                continue;
            }
            m.set_col(i, lift(n, to_bar(c, n, i), 0));
        }
        g.set(n, std::move(m));
    }
    return g;
}

void check_coalgebra_morphism(const GMap& g, const DGCoalgebra& c, const DGCoalgebra& d)
{
    if (g.deg() != 0)
        fail("coalgebra morphism must have degree 0");
    const Field& f = c.field();
    if (g.defined(0))
        for (int i = 0; i < c.space()->dim(0); ++i)
            if (d.counit(0, g.apply(0, SVec::unit(i, f.one()))) != c.counit(0, SVec::unit(i, f.one())))
                fail("coalgebra morphism does not preserve the counit on " + basis_name(*c.space(), 0, i));
    GMap lhs = compose(d.cop, g);
    GMap rhs = compose(tensor_map(g, g, c.cop.tgt()), c.cop);
    if (auto w = first_column_difference(lhs, rhs))
        fail("not comultiplicative on " + basis_name(*c.space(), w->first, w->second));
    if (auto n = chain_map_defect(g, c.cx, d.cx))
        fail("coalgebra morphism is not a chain map in degree " + std::to_string(*n));
}

CoalgebraP truncate_coalgebra(const CoalgebraP& c)
{
    const Window& w = c->space()->window();
    if (w.above)
        return c;
    if (!w.below || w.lo < 0)
        fail("truncation needs a coalgebra supported in degrees >= 0");
    SpaceP s = restrict_space(c->space(), Window::finite(w.lo, w.hi));
    DGCoalgebra t = *c;
    t.cx = {s, restrict_map(c->cx.d, s, s)};
    t.cop = restrict_map(c->cop, s, tensor_space(s, s));
    return make_coalgebra(std::move(t));
}

}  // namespace kd
