#include "kd/golod.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw StructuralError(what); }

bool reduced_vanishes(HomologyPolarity h, int n) { return h == HomologyPolarity::hp ? n <= 0 : n >= -1; }

// homology classes of reduced H(B) whose suspension has |degree| <= cutoff
MasseyOperation prepare(const AlgebraP& b, int cutoff, const Homology& h)
{
    MasseyOperation o;
    o.b = b;
    if (!b->augmented)
        fail("Massey operations need an augmented algebra");
    const Window& w = b->space()->window();
    o.polarity = b->polarity == Polarity::n ? HomologyPolarity::hn : HomologyPolarity::hp;
    bool hp = o.polarity == HomologyPolarity::hp;
    if (hp ? !w.below : !w.above)
        fail("homology polarity cannot be verified: B is not determined on the " +
             std::string(hp ? "negative" : "positive") + " side");
    // B must be known through the degrees of o and one beyond, for certified homology
    if (hp && !w.above)
        cutoff = std::min(cutoff, w.hi);
    if (!hp && !w.below)
        cutoff = std::min(cutoff, -w.lo);
    o.cutoff = cutoff;

    for (int n = w.lo; n <= w.hi; ++n) {
        if (!reduced_vanishes(o.polarity, n))
            continue;
        if (!h.certified(n))
            fail("homology polarity cannot be verified in degree " + std::to_string(n));
        if (h.rank(n) != (n == 0 ? 1 : 0))
            fail("homology polarity violation (" + homology_polarity_name(o.polarity) + "): reduced homology in degree " +
                 std::to_string(n));
    }

    int sgn = hp ? 1 : -1;
    for (int m = hp ? 1 : 2; std::abs(m * sgn + 1) <= cutoff; ++m) {
        int n = sgn * m;
        if (!h.certified(n))
            fail("homology of B is not certified in degree " + std::to_string(n));
        const auto& reps = h.reps(n);
        for (std::size_t i = 0; i < reps.size(); ++i) {
            MasseyClass c;
            c.degree = n;
            c.rep = reps[i];
            if (c.rep.size() == 1 && c.rep.top_value().is_one())
                c.label = b->space()->labels(n)[static_cast<std::size_t>(c.rep.top())];
            else
                c.label = "h" + std::to_string(n) + "_" + std::to_string(i);
            o.classes.push_back(std::move(c));
        }
    }
    return o;
}

// position of a class among the homology representatives of its degree
int class_slot(const MasseyOperation& o, int k)
{
    int slot = 0;
    for (int i = 0; i < k; ++i)
        if (o.classes[static_cast<std::size_t>(i)].degree == o.classes[static_cast<std::size_t>(k)].degree)
            ++slot;
    return slot;
}

// sum_j (-1)^{|h1|+...+|hj|+j} o(h1..hj) o(hj+1..hp)
SVec massey_rhs(const MasseyOperation& o, const std::vector<int>& t)
{
    const Field& f = o.b->field();
    VecBuilder z;
    int prefix = 0;
    for (std::size_t j = 1; j < t.size(); ++j) {
        prefix += o.classes[static_cast<std::size_t>(t[j - 1])].degree;
        std::vector<int> left(t.begin(), t.begin() + static_cast<long>(j));
        std::vector<int> right(t.begin() + static_cast<long>(j), t.end());
        auto l = o.values.find(left), r = o.values.find(right);
        if (l == o.values.end() || r == o.values.end())
            continue;
        SVec prod = o.b->product(o.degree(left), l->second, o.degree(right), r->second);
        z.add(prod, parity_sign(f, prefix + static_cast<long>(j)));
    }
    return z.build();
}

std::vector<std::pair<int, std::string>> letters_of(const MasseyOperation& o)
{
    std::vector<std::pair<int, std::string>> r;
    for (const auto& c : o.classes)
        r.emplace_back(c.degree + 1, c.label);
    return r;
}

ProductTriviality products(const MasseyOperation& o, const Homology& h)
{
    ProductTriviality p;
    int nc = static_cast<int>(o.classes.size());
    for (int i = 0; i < nc; ++i)
        for (int j = 0; j < nc; ++j) {
            const auto& a = o.classes[static_cast<std::size_t>(i)];
            const auto& c = o.classes[static_cast<std::size_t>(j)];
            int n = a.degree + c.degree;
            if (!o.b->space()->known(n) || !h.certified(n))
                continue;
            auto cls = h.classify(n, o.b->product(a.degree, a.rep, c.degree, c.rep));
            if (!cls)
                throw std::logic_error("internal error: product of cycles is not a cycle");
            if (!cls->empty()) {
                p.trivial = false;
                p.witness = std::make_pair(i, j);
                return p;
            }
        }
    return p;
}

}  // namespace

std::string homology_polarity_name(HomologyPolarity h) { return h == HomologyPolarity::hp ? "hp" : "hn"; }

std::string golod_verdict_name(GolodVerdict v)
{
    switch (v) {
    case GolodVerdict::golod: return "golod";
    case GolodVerdict::not_golod: return "not-golod";
    default: return "inconclusive";
    }
}

int MasseyOperation::degree(const std::vector<int>& tuple) const
{
    int d = static_cast<int>(tuple.size()) - 1;
    for (int k : tuple)
        d += classes[static_cast<std::size_t>(k)].degree;
    return d;
}

MasseyOperation massey_build(const AlgebraP& b, int cutoff)
{
    Homology h(b->cx);
    MasseyOperation o = prepare(b, cutoff, h);
    CoalgebraP tc = massey_coalgebra(o);
    const WordBasis& wb = *tc->words;
    int sgn = o.polarity == HomologyPolarity::hp ? 1 : -1;
    for (int m = 1; m <= o.cutoff; ++m) {
        auto it = wb.words.find(sgn * m);
        if (it == wb.words.end())
            continue;
        std::vector<Word> tuples = it->second;
        std::sort(tuples.begin(), tuples.end());
        for (const Word& w : tuples) {
            std::vector<int> t(w.begin(), w.end());
            if (t.size() == 1) {
                o.values[t] = o.classes[static_cast<std::size_t>(t[0])].rep;
                o.log.push_back({t, true});
                continue;
            }
            SVec z = massey_rhs(o, t);
            int zd = o.degree(t) - 1;
            auto y = z.empty() ? std::optional<SVec>(SVec()) : h.bound(zd, z);
            if (!y) {
                auto cls = h.classify(zd, z);
                if (!cls)
                    throw std::logic_error("internal error: Massey right-hand side is not a cycle");
                o.log.push_back({t, false});
                o.obstruction = MasseyObstruction{t, zd, z, *cls};
                return o;
            }
            o.values[t] = *y;
            o.log.push_back({t, true});
        }
    }
    return o;
}

std::optional<std::vector<int>> massey_defect(const MasseyOperation& o)
{
    Homology h(o.b->cx);
    for (const auto& [t, v] : o.values) {
        int n = o.degree(t);
        int dim = o.b->space()->dim(n);
        if (!v.empty() && v.top() >= dim)
            return t;
        SVec dv = o.b->cx.d.apply(n, v);
        if (t.size() == 1) {
            auto cls = h.classify(n, v);
            int k = t[0];
            if (!dv.empty() || !cls || *cls != SVec::unit(class_slot(o, k), o.b->field().one()))
                return t;
        } else if (dv != massey_rhs(o, t)) {
            return t;
        }
    }
    return std::nullopt;
}

CoalgebraP massey_coalgebra(const MasseyOperation& o)
{
    std::vector<std::pair<std::string, int>> letters;
    for (const auto& [d, l] : letters_of(o))
        letters.emplace_back(l, d);
    return tensor_coalgebra(o.b->field(), letters, o.cutoff);
}

GMap massey_map(const MasseyOperation& o, const CoalgebraP& tc)
{
    const SpaceP& src = tc->space();
    const SpaceP& tgt = o.b->space();
    const WordBasis& wb = *tc->words;
    GMap tau(src, tgt, -1);
    for (int n : tau.domain()) {
        if (!src->dim(n))
            continue;
        if (!tgt->determined(n - 1)) {
            tau.undefine(n);
            continue;
        }
        Mat m(tgt->dim(n - 1), src->dim(n));
        const auto& ws = wb.words.at(n);
        for (int c = 0; c < src->dim(n); ++c) {
            std::vector<int> t(ws[static_cast<std::size_t>(c)].begin(), ws[static_cast<std::size_t>(c)].end());
            auto it = o.values.find(t);
            if (!t.empty() && it != o.values.end())
                m.set_col(c, it->second);
        }
        tau.set(n, std::move(m));
    }
    return tau;
}

TwistingMap tau_from_massey(const MasseyOperation& o)
{
    CoalgebraP tc = massey_coalgebra(o);
    return make_twisting(tc, o.b, massey_map(o, tc));
}

ProductTriviality product_triviality_check(const MasseyOperation& o) { return products(o, Homology(o.b->cx)); }

ProductTriviality product_triviality_check(const AlgebraP& b, int cutoff)
{
    Homology h(b->cx);
    return products(prepare(b, cutoff, h), h);
}

GolodCertificate golod_check(const AlgebraP& b, int cutoff)
{
    GolodCertificate g;
    g.massey = massey_build(b, cutoff);
    g.cutoff = g.massey.cutoff;
    g.polarity = g.massey.polarity;
    g.products = product_triviality_check(g.massey);
    if (g.massey.complete())
        g.acyclic = acyclic_check(tau_from_massey(g.massey), g.cutoff);

    auto bb = bar(b, g.cutoff + 1);
    ExtTable ext = ext_ranks(bb.tau, trivial_module(b, Side::left), g.cutoff);
    int side = g.polarity == HomologyPolarity::hp ? -1 : 1;
    for (const auto& [n, r] : ext.ranks)
        if (n * side >= 0)
            g.ext_ranks[n] = r;

    // ranks of the free algebra on W*, degrees -(|h|+1)
    int sgn = g.polarity == HomologyPolarity::hp ? -1 : 1;
    std::map<int, int> gens;
    for (const auto& c : g.massey.classes)
        ++gens[-(c.degree + 1)];
    g.free_ranks[0] = 1;
    for (int m = 1; m <= g.cutoff; ++m) {
        long r = 0;
        for (const auto& [d, cnt] : gens)
            if (std::abs(d) <= m)
                r += static_cast<long>(cnt) * g.free_ranks[sgn * m - d];
        g.free_ranks[sgn * m] = static_cast<int>(r);
    }
    for (int m = 0; m <= g.cutoff && !g.ext_mismatch; ++m) {
        auto e = g.ext_ranks.find(sgn * m);
        if (e != g.ext_ranks.end() && e->second != g.free_ranks.at(sgn * m))
            g.ext_mismatch = sgn * m;
    }

    if (g.massey.complete() && g.acyclic && g.acyclic->acyclic && !g.ext_mismatch)
        g.verdict = GolodVerdict::golod;
    else if (!g.products.trivial)
        g.verdict = GolodVerdict::not_golod;
    else
        g.verdict = GolodVerdict::inconclusive;
    return g;
}

AlgebraP trivial_extension(const SpaceP& v)
{
    const Field& f = v->field();
    const Window& w = v->window();
    if (!w.below || !w.above)
        fail("trivial extension needs a finite graded space");
    Presentation p;
    int gmax = 0;
    for (int n : v->degrees()) {
        if (!v->dim(n))
            continue;
        if (n == 0)
            fail("trivial extension by a space with degree 0 part would not be augmented over k");
        for (const auto& l : v->labels(n)) {
            std::string name;
            for (char ch : l)
                name += std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'' ? ch : '_';
            if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])))
                name = "v" + name;
            p.gens.emplace_back(name, n);
        }
        gmax = std::max(gmax, std::abs(n));
    }
    p.polarity = !p.gens.empty() && p.gens.front().second < 0 ? Polarity::n : Polarity::p;
    for (int x = 0; x < static_cast<int>(p.gens.size()); ++x)
        for (int y = 0; y < static_cast<int>(p.gens.size()); ++y)
            p.rels.push_back({Term{1, {x, y}}});
    p.cutoff = 2 * gmax + 1;
    return from_presentation(p, f);
}

}  // namespace kd
