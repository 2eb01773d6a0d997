#include "kd/dg_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace kd {

namespace {

[[noreturn]] void fail(const std::string& what) { throw StructuralError(what); }

std::string basis_name(const Space& s, int n, int i) { return s.labels(n)[static_cast<std::size_t>(i)]; }

// label of a basis element of a tensor space, split into its factors
std::string tensor_witness(const Space& t, int n, int idx)
{
    return "(" + basis_name(t, n, idx) + ")";
}

}  // namespace

std::string polarity_name(Polarity pol)
{
    switch (pol) {
    case Polarity::p:
        return "p";
    case Polarity::n:
        return "n";
    default:
        return "none";
    }
}

Polarity parse_polarity(std::string_view text)
{
    if (text == "p")
        return Polarity::p;
    if (text == "n")
        return Polarity::n;
    if (text == "none")
        return Polarity::none;
    throw std::invalid_argument("polarity must be p or n, got " + std::string(text));
}

std::string side_name(Side s) { return s == Side::left ? "left" : "right"; }

void WordBasis::build_index()
{
    pos.clear();
    for (const auto& [n, ws] : words)
        for (std::size_t i = 0; i < ws.size(); ++i)
            pos[n].emplace(ws[i], static_cast<int>(i));
}

int WordBasis::degree(const Word& w) const
{
    int d = 0;
    for (int x : w)
        d += letter_deg[static_cast<std::size_t>(x)];
    return d;
}

std::string WordBasis::label(const Word& w, const std::string& sep, const std::string& empty) const
{
    if (w.empty())
        return empty;
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            s += sep;
        s += letters[static_cast<std::size_t>(w[i])];
    }
    return s;
}

std::optional<int> WordBasis::index_of(int n, const Word& w) const
{
    auto it = pos.find(n);
    if (it == pos.end())
        return std::nullopt;
    auto jt = it->second.find(w);
    if (jt == it->second.end())
        return std::nullopt;
    return jt->second;
}

SVec DGAlgebra::product(int i, const SVec& a, int j, const SVec& b) const
{
    if (a.empty() || b.empty())
        return {};
    const Space& aa = *mul.src();
    int n = i + j;
    if (!mul.defined(n))
        fail("product outside the known window in degree " + std::to_string(n));
    if (aa.dim(n) == 0)
        return {};
    VecBuilder t;
    for (const auto& [x, s] : a)
        for (const auto& [y, r] : b)
            t.add(aa.tensor_index(n, i, x, y), s * r);
    return mul.apply(n, t.build());
}

SVec DGAlgebra::product(int i, int a, int j, int b) const
{
    const Scalar one = field().one();
    return product(i, SVec::unit(a, one), j, SVec::unit(b, one));
}

Scalar DGAlgebra::augment(int n, const SVec& a) const
{
    return n == 0 ? a.get(unit) : field().zero();
}

namespace {

void check_polarity(const Space& s, Polarity pol, int unit_deg_dim, const std::string& what)
{
    if (pol == Polarity::none)
        return;
    const Window& w = s.window();
    if (s.dim(0) != unit_deg_dim)
        fail(what + " polarity " + polarity_name(pol) + " needs a one-dimensional degree 0");
    if (pol == Polarity::p) {
        if (!w.below && w.lo > 0)
            fail(what + " polarity p needs degrees below 0 to be known");
        for (int n = w.lo; n < 0; ++n)
            if (s.dim(n))
                fail(what + " polarity p violated in degree " + std::to_string(n));
    } else {
        int bound = what == "algebra" ? -1 : 0;
        if (!w.above && w.hi < bound)
            fail(what + " polarity n needs degrees above " + std::to_string(bound - 1) + " to be known");
        for (int n = std::max(w.lo, 1); n <= w.hi; ++n)
            if (s.dim(n))
                fail(what + " polarity n violated in degree " + std::to_string(n));
        if (bound == -1 && s.dim(-1))
            fail(what + " polarity n violated in degree -1");
    }
}

}  // namespace

void check_dga(const DGAlgebra& a)
{
    const Space& s = *a.space();
    const Field& f = a.field();
    if (s.dim(0) <= a.unit)
        fail("unit is not a basis vector of degree 0");
    check_d2(a.cx);

    // unit laws
    for (int n : s.degrees())
        for (int i = 0; i < s.dim(n); ++i) {
            if (!a.mul.defined(n))
                continue;
            SVec e = SVec::unit(i, f.one());
            if (a.product(0, a.unit_vec(), n, e) != e || a.product(n, e, 0, a.unit_vec()) != e)
                fail("unit law fails on " + basis_name(s, n, i));
        }

    // associativity: mul (mul|1) = mul (1|mul) assoc
    GMap id = identity_map(a.space());
    GMap lhs = compose(a.mul, tensor_map(a.mul, id));
    GMap rhs = compose(compose(a.mul, tensor_map(id, a.mul)), assoc(lhs.src()));
    if (auto n = first_difference(lhs, rhs)) {
        Mat l = lhs.block(*n), r = rhs.block(*n);
        for (int c = 0; c < l.cols(); ++c)
            if (l.col(c) != r.col(c))
                fail("associativity fails on " + tensor_witness(*lhs.src(), *n, c));
    }

    // Leibniz: the product is a chain map
    Complex aa{a.mul.src(), tensor_differential(a.cx, a.cx, a.mul.src())};
    if (auto n = chain_map_defect(a.mul, aa, a.cx)) {
        GMap l = compose(a.cx.d, a.mul), r = compose(a.mul, aa.d);
        Mat lb = l.block(*n), rb = r.block(*n);
        for (int c = 0; c < lb.cols(); ++c)
            if (lb.col(c) != rb.col(c))
                fail("Leibniz rule fails on " + tensor_witness(*aa.space, *n, c));
    }

    if (a.augmented) {
        if (!a.cx.d.apply(0, a.unit_vec()).empty())
            fail("augmentation: the unit is not a cycle");
        if (a.cx.d.defined(1)) {
            Mat d1 = a.cx.d.block(1);
            for (int c = 0; c < d1.cols(); ++c)
                if (!d1.col(c).get(a.unit).is_zero())
                    fail("augmentation is not a chain map: d(" + basis_name(s, 1, c) + ") hits the unit");
        }
        if (a.mul.defined(0))
            for (const auto& blk : a.mul.src()->blocks(0))
                for (int x = 0; x < blk.left_dim; ++x)
                    for (int y = 0; y < blk.right_dim; ++y) {
                        if (a.is_unit(blk.left_deg, x) || a.is_unit(-blk.left_deg, y))
                            continue;
                        SVec p = a.product(blk.left_deg, x, -blk.left_deg, y);
                        if (!p.get(a.unit).is_zero())
                            fail("augmentation is not multiplicative on " +
                                 basis_name(s, blk.left_deg, x) + "*" + basis_name(s, -blk.left_deg, y));
                    }
    }
    check_polarity(s, a.polarity, 1, "algebra");
}

AlgebraP make_algebra(DGAlgebra a)
{
    check_dga(a);
    return std::make_shared<const DGAlgebra>(std::move(a));
}

GMap unit_map(const DGAlgebra& a)
{
    GMap u(ground_space(a.field()), a.space(), 0);
    Mat m(a.space()->dim(0), 1);
    m.set_col(0, a.unit_vec());
    u.set(0, m);
    return u;
}

GMap augmentation_map(const DGAlgebra& a)
{
    GMap e(a.space(), ground_space(a.field()), 0);
    if (e.defined(0)) {
        Mat m(1, a.space()->dim(0));
        m.add(0, a.unit, a.field().one());
        e.set(0, m);
    }
    return e;
}

// ---------------------------------------------------------------- modules

SVec DGModule::act_on(int i, const SVec& a, int j, const SVec& m) const
{
    if (a.empty() || m.empty())
        return {};
    const Space& t = *act.src();
    int n = i + j;
    if (!act.defined(n))
        fail("action outside the known window in degree " + std::to_string(n));
    if (t.dim(n) == 0)
        return {};
    VecBuilder v;
    for (const auto& [x, s] : a)
        for (const auto& [y, r] : m)
            v.add(side == Side::left ? t.tensor_index(n, i, x, y) : t.tensor_index(n, j, y, x), s * r);
    return act.apply(n, v.build());
}

void check_module(const DGModule& m)
{
    const DGAlgebra& a = *m.alg;
    const Space& s = *m.space();
    const Field& f = m.field();
    check_d2(m.cx);
    for (int n : s.degrees()) {
        if (!m.act.defined(n))
            continue;
        for (int i = 0; i < s.dim(n); ++i) {
            SVec e = SVec::unit(i, f.one());
            if (m.act_on(0, a.unit_vec(), n, e) != e)
                fail("module unit law fails on " + basis_name(s, n, i));
        }
    }
    GMap idm = identity_map(m.space()), ida = identity_map(a.space());
    GMap lhs, rhs;
    if (m.side == Side::left) {
        // (ab)m = a(bm)
        lhs = compose(m.act, tensor_map(a.mul, idm));
        rhs = compose(compose(m.act, tensor_map(ida, m.act)), assoc(lhs.src()));
    } else {
        // (ma)b = m(ab)
        lhs = compose(m.act, tensor_map(m.act, ida));
        rhs = compose(compose(m.act, tensor_map(idm, a.mul)), assoc(lhs.src()));
    }
    if (auto n = first_difference(lhs, rhs)) {
        Mat l = lhs.block(*n), r = rhs.block(*n);
        for (int c = 0; c < l.cols(); ++c)
            if (l.col(c) != r.col(c))
                fail("module associativity fails on " + tensor_witness(*lhs.src(), *n, c));
    }
    Complex src = m.side == Side::left ? Complex{m.act.src(), tensor_differential(a.cx, m.cx, m.act.src())}
                                       : Complex{m.act.src(), tensor_differential(m.cx, a.cx, m.act.src())};
    if (auto n = chain_map_defect(m.act, src, m.cx))
        fail("action is not a chain map in degree " + std::to_string(*n));
}

ModuleP make_module(DGModule m)
{
    check_module(m);
    return std::make_shared<const DGModule>(std::move(m));
}

ModuleP regular_module(const AlgebraP& a, Side side)
{
    return make_module({a, side, a->cx, a->mul});
}

ModuleP trivial_module(const AlgebraP& a, Side side)
{
    if (!a->augmented)
        fail("trivial module needs an augmented algebra");
    SpaceP k = ground_space(a->field());
    SpaceP t = side == Side::left ? tensor_space(a->space(), k) : tensor_space(k, a->space());
    GMap act(t, k, 0);
    if (act.defined(0)) {
        Mat m(1, t->dim(0));
        int idx = side == Side::left ? t->tensor_index(0, 0, a->unit, 0) : t->tensor_index(0, 0, 0, a->unit);
        m.add(0, idx, a->field().one());
        act.set(0, m);
    }
    return make_module({a, side, zero_complex(k), act});
}

ModuleP free_module(const AlgebraP& a, const Complex& v, Side side)
{
    if (side == Side::left) {
        Complex m = tensor(a->cx, v);
        SpaceP src = tensor_space(a->space(), m.space);
        GMap ai = assoc_inv(src);
        GMap act = compose(tensor_map(a->mul, identity_map(v.space), ai.tgt(), m.space), ai);
        return make_module({a, side, m, restrict_map(act, src, m.space)});
    }
    Complex m = tensor(v, a->cx);
    SpaceP src = tensor_space(m.space, a->space());
    GMap as = assoc(src);
    GMap act = compose(tensor_map(identity_map(v.space), a->mul, as.tgt(), m.space), as);
    return make_module({a, side, m, restrict_map(act, src, m.space)});
}

ModuleP module_from_action(const AlgebraP& a, Side side, const Complex& cx, GMap act)
{
    return make_module({a, side, cx, std::move(act)});
}

// ---------------------------------------------------------------- presentations

ParseError::ParseError(int l, int c, const std::string& what)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + what), line(l),
      column(c)
{
}

int Presentation::poly_degree(const Poly& p) const
{
    if (p.empty())
        return 0;
    int d = 0;
    for (int x : p.front().word)
        d += gens[static_cast<std::size_t>(x)].second;
    return d;
}

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 0;
    std::size_t line_start = 0;

    int col() const { return static_cast<int>(pos - line_start) + 1; }
    void skip_ws()
    {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t'))
            ++pos;
    }
    bool done()
    {
        skip_ws();
        return pos >= text.size();
    }
    [[noreturn]] void error(const std::string& what) const { throw ParseError(line, col(), what); }
    char peek()
    {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    std::string ident()
    {
        skip_ws();
        std::size_t s = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' || text[pos] == '\''))
            ++pos;
        if (s == pos)
            error("expected a name");
        return std::string(text.substr(s, pos - s));
    }
    long integer()
    {
        skip_ws();
        std::size_t s = pos;
        if (pos < text.size() && text[pos] == '-')
            ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (s == pos || (pos == s + 1 && text[s] == '-'))
            error("expected an integer");
        return std::stol(std::string(text.substr(s, pos - s)));
    }
};

int gen_index(const Presentation& p, const std::string& name)
{
    for (std::size_t i = 0; i < p.gens.size(); ++i)
        if (p.gens[i].first == name)
            return static_cast<int>(i);
    return -1;
}

// sum := [sign] term { (+|-) term };  term := [int ['*']] word | int;  word := gen {'*' gen}
Poly parse_sum(Cursor& c, const Presentation& p)
{
    Poly out;
    bool first = true;
    while (!c.done()) {
        long sign = 1;
        char ch = c.peek();
        if (ch == '+' || ch == '-') {
            sign = ch == '-' ? -1 : 1;
            ++c.pos;
        } else if (!first) {
            c.error("expected + or -");
        }
        first = false;
        Term t;
        t.coef = sign;
        ch = c.peek();
        bool have_coef = false;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            t.coef *= c.integer();
            have_coef = true;
            if (c.peek() == '*')
                ++c.pos;
        }
        ch = c.peek();
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            while (true) {
                std::size_t at = c.pos;
                std::string g = c.ident();
                int gi = gen_index(p, g);
                if (gi < 0) {
                    c.pos = at;
                    c.skip_ws();
                    c.error("unknown generator '" + g + "'");
                }
                t.word.push_back(gi);
                if (c.peek() != '*')
                    break;
                ++c.pos;
            }
        } else if (!have_coef) {
            c.error("expected a term");
        }
        if (t.coef != 0)
            out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

Presentation parse_presentation(std::string_view text)
{
    Presentation p;
    std::size_t start = 0;
    int line = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line;
        std::string_view raw = text.substr(start, end - start);
        if (auto h = raw.find('#'); h != std::string_view::npos)
            raw = raw.substr(0, h);
        if (!raw.empty() && raw.back() == '\r')
            raw.remove_suffix(1);
        Cursor c{raw, 0, line, 0};
        if (!c.done()) {
            std::string kw = c.ident();
            if (kw == "gen") {
                std::size_t at = c.pos;
                std::string name = c.ident();
                if (gen_index(p, name) >= 0) {
                    c.pos = at;
                    c.skip_ws();
                    c.error("duplicate generator '" + name + "'");
                }
                long d = c.integer();
                if (d == 0) {
                    c.pos = at;
                    c.skip_ws();
                    c.error("generator '" + name + "' has degree 0");
                }
                p.gens.emplace_back(name, static_cast<int>(d));
            } else if (kw == "rel") {
                Poly r = parse_sum(c, p);
                int deg = std::numeric_limits<int>::min();
                for (const auto& t : r) {
                    int d = 0;
                    for (int x : t.word)
                        d += p.gens[static_cast<std::size_t>(x)].second;
                    if (t.word.empty())
                        throw ParseError(line, 1, "relation has a constant term");
                    if (deg != std::numeric_limits<int>::min() && d != deg) {
                        Poly one{t};
                        throw ParseError(line, 1,
                                         "inhomogeneous relation: term " + format_poly(p, one) + " has degree " +
                                             std::to_string(d) + ", expected " + std::to_string(deg));
                    }
                    deg = d;
                }
                if (!r.empty())
                    p.rels.push_back(std::move(r));
            } else if (kw == "diff") {
                std::size_t at = c.pos;
                std::string g = c.ident();
                int gi = gen_index(p, g);
                if (gi < 0) {
                    c.pos = at;
                    c.skip_ws();
                    c.error("unknown generator '" + g + "'");
                }
                if (c.peek() != '=')
                    c.error("expected '='");
                ++c.pos;
                Poly r = parse_sum(c, p);
                int want = p.gens[static_cast<std::size_t>(gi)].second - 1;
                for (const auto& t : r) {
                    int d = 0;
                    for (int x : t.word)
                        d += p.gens[static_cast<std::size_t>(x)].second;
                    if (d != want)
                        throw ParseError(line, 1,
                                         "differential of '" + g + "' must have degree " + std::to_string(want) +
                                             ", term " + format_poly(p, Poly{t}) + " has degree " +
                                             std::to_string(d));
                }
                p.diffs.emplace_back(gi, std::move(r));
            } else if (kw == "polarity") {
                std::size_t at = c.pos;
                std::string v = c.ident();
                if (v != "p" && v != "n") {
                    c.pos = at;
                    c.skip_ws();
                    c.error("polarity must be p or n");
                }
                p.polarity = parse_polarity(v);
            } else if (kw == "cutoff") {
                long v = c.integer();
                if (v < 2)
                    c.error("cutoff must be at least 2");
                p.cutoff = static_cast<int>(v);
            } else {
                throw ParseError(line, 1, "unknown directive '" + kw + "'");
            }
            if (!c.done())
                c.error("unexpected trailing input");
        }
        if (end == text.size())
            break;
        start = end + 1;
    }
    check_generator_polarity(p);
    return p;
}

void check_generator_polarity(const Presentation& p)
{
    for (const auto& [name, d] : p.gens) {
        if (p.polarity == Polarity::p && d < 1)
            throw ParseError(0, 0, "polarity violation: generator '" + name + "' has degree " + std::to_string(d) +
                                       " but polarity p needs degrees >= 1");
        if (p.polarity == Polarity::n && d > -2)
            throw ParseError(0, 0, "polarity violation: generator '" + name + "' has degree " + std::to_string(d) +
                                       " but polarity n needs degrees <= -2");
    }
}

Presentation load_presentation(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_presentation(ss.str());
}

std::string format_poly(const Presentation& p, const Poly& poly)
{
    if (poly.empty())
        return "0";
    std::string s;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Term& t = poly[i];
        long c = t.coef;
        if (i)
            s += c < 0 ? " - " : " + ";
        else if (c < 0)
            s += "-";
        long a = c < 0 ? -c : c;
        if (a != 1 || t.word.empty())
            s += std::to_string(a) + (t.word.empty() ? "" : "*");
        for (std::size_t j = 0; j < t.word.size(); ++j)
            s += (j ? "*" : "") + p.gens[static_cast<std::size_t>(t.word[j])].first;
    }
    return s;
}

// ---------------------------------------------------------------- materialization

namespace {

// Words of T(V) in one degree, in increasing degree-lexicographic order.
struct Slice {
    std::vector<Word> words;
    std::map<Word, int> pos;
    std::shared_ptr<Echelon> ideal;
    std::vector<int> normal;          // indices of non-pivot words
    std::map<int, int> normal_index;  // word index -> basis index
};

bool deglex_less(const Word& a, const Word& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

}  // namespace

AlgebraP from_presentation(const Presentation& p, const Field& f, std::optional<int> cutoff_arg)
{
    std::optional<int> co = cutoff_arg ? cutoff_arg : p.cutoff;
    if (!co && !p.gens.empty())
        fail("presentation needs a cutoff");
    int cutoff = co.value_or(1);
    int sgn = p.gens.empty() || p.gens.front().second > 0 ? 1 : -1;
    int gmax = 0;
    for (const auto& [name, d] : p.gens) {
        if (d == 0)
            fail("generator '" + name + "' has degree 0: word count per degree would be infinite");
        if ((d > 0) != (sgn > 0))
            fail("generators of both signs: word count per degree would be infinite");
        gmax = std::max(gmax, std::abs(d));
    }
    for (const auto& r : p.rels)
        for (const auto& t : r)
            if (p.poly_degree(Poly{t}) != p.poly_degree(r))
                fail("inhomogeneous relation: offending term " + format_poly(p, Poly{t}));

    std::map<int, Slice> slices;
    int zero_run = 0;
    int last_nonzero = 0;
    bool finite = false;
    int m = 0;  // |degree|
    for (; m <= cutoff; ++m) {
        int n = sgn * m;
        Slice& sl = slices[n];
        if (m == 0) {
            sl.words.push_back({});
        } else {
            for (std::size_t x = 0; x < p.gens.size(); ++x) {
                int prev = n - p.gens[x].second;
                auto it = slices.find(prev);
                if (it == slices.end())
                    continue;
                for (const auto& w : it->second.words) {
                    Word v;
                    v.push_back(static_cast<int>(x));
                    v.insert(v.end(), w.begin(), w.end());
                    sl.words.push_back(std::move(v));
                }
            }
            std::sort(sl.words.begin(), sl.words.end(), deglex_less);
        }
        for (std::size_t i = 0; i < sl.words.size(); ++i)
            sl.pos.emplace(sl.words[i], static_cast<int>(i));
        sl.ideal = std::make_shared<Echelon>(f);
        auto to_vec = [&](const Poly& r) {
            VecBuilder b;
            for (const auto& t : r)
                b.add(sl.pos.at(t.word), f.from_int(t.coef));
            return b.build();
        };
        for (const auto& r : p.rels)
            if (p.poly_degree(r) == n)
                sl.ideal->insert(to_vec(r));
        for (std::size_t x = 0; x < p.gens.size(); ++x) {
            auto it = slices.find(n - p.gens[x].second);
            if (it == slices.end() || !it->second.ideal)
                continue;
            const Slice& prev = it->second;
            for (const SVec& row : prev.ideal->basis()) {
                VecBuilder l, r;
                for (const auto& [i, c] : row) {
                    const Word& w = prev.words[static_cast<std::size_t>(i)];
                    Word lw{static_cast<int>(x)};
                    lw.insert(lw.end(), w.begin(), w.end());
                    Word rw = w;
                    rw.push_back(static_cast<int>(x));
                    l.add(sl.pos.at(lw), c);
                    r.add(sl.pos.at(rw), c);
                }
                sl.ideal->insert(l.build());
                sl.ideal->insert(r.build());
            }
        }
        for (int i = 0; i < static_cast<int>(sl.words.size()); ++i)
            if (!sl.ideal->is_pivot(i)) {
                sl.normal_index.emplace(i, static_cast<int>(sl.normal.size()));
                sl.normal.push_back(i);
            }
        if (sl.normal.empty()) {
            if (++zero_run >= gmax && m > 0) {
                finite = true;
                break;
            }
        } else {
            zero_run = 0;
            last_nonzero = n;
        }
    }

    auto wb = std::make_shared<WordBasis>();
    Basis basis;
    for (const auto& [name, d] : p.gens) {
        wb->letters.push_back(name);
        wb->letter_deg.push_back(d);
    }
    for (const auto& [n, sl] : slices) {
        if (sl.normal.empty())
            continue;
        std::vector<std::string> labels;
        for (int i : sl.normal) {
            const Word& w = sl.words[static_cast<std::size_t>(i)];
            wb->words[n].push_back(w);
            labels.push_back(wb->label(w, "*", "1"));
        }
        basis.emplace(n, std::move(labels));
    }
    wb->build_index();
    Window win;
    if (finite)
        win = sgn > 0 ? Window::finite(0, last_nonzero) : Window::finite(last_nonzero, 0);
    else
        win = sgn > 0 ? Window::bounded_below(0, cutoff) : Window::bounded_above(-cutoff, 0);
    SpaceP space = make_space(f, win, std::move(basis));

    // class of a word of T(V) in A, as coordinates on the normal basis
    auto reduce = [&](int n, const SVec& v) -> SVec {
        auto it = slices.find(n);
        if (it == slices.end())
            return {};
        const Slice& sl = it->second;
        SVec r = sl.ideal->normal_form(v);
        VecBuilder b;
        for (const auto& [i, c] : r)
            b.add(sl.normal_index.at(i), c);
        return b.build();
    };
    auto word_class = [&](const Word& w) -> SVec {
        int n = wb->degree(w);
        if (!space->known(n))
            return {};
        auto it = slices.find(n);
        if (it == slices.end())
            return {};
        return reduce(n, SVec::unit(it->second.pos.at(w), f.one()));
    };
    for (std::size_t x = 0; x < p.gens.size(); ++x)
        wb->letter_vec.push_back(word_class({static_cast<int>(x)}));

    SpaceP aa = tensor_space(space, space);
    GMap mul(aa, space, 0);
    for (int n : mul.domain()) {
        Mat blk(space->dim(n), aa->dim(n));
        if (space->known(n) || space->dim(n) == 0) {
            for (const auto& b : aa->blocks(n)) {
                const auto& lw = wb->words.at(b.left_deg);
                const auto& rw = wb->words.at(n - b.left_deg);
                for (int x = 0; x < b.left_dim; ++x)
                    for (int y = 0; y < b.right_dim; ++y) {
                        Word w = lw[static_cast<std::size_t>(x)];
                        const Word& v = rw[static_cast<std::size_t>(y)];
                        w.insert(w.end(), v.begin(), v.end());
                        blk.set_col(b.offset + x * b.right_dim + y, word_class(w));
                    }
            }
            mul.set(n, std::move(blk));
        } else {
            mul.undefine(n);
        }
    }

    DGAlgebra a;
    a.cx = zero_complex(space);
    a.mul = std::move(mul);
    a.unit = 0;
    a.augmented = true;
    a.polarity = p.polarity;
    a.words = wb;

    if (!p.diffs.empty()) {
        std::vector<SVec> images(p.gens.size());
        for (const auto& [g, poly] : p.diffs) {
            VecBuilder b;
            for (const auto& t : poly)
                b.add(word_class(t.word), f.from_int(t.coef));
            images[static_cast<std::size_t>(g)] = b.build();
        }
        // the derivation descends to A iff each relation maps into the ideal
        for (const auto& r : p.rels) {
            int n = p.poly_degree(r);
            if (!space->known(n) || !space->known(n - 1))
                continue;
            VecBuilder b;
            for (const auto& t : r)
                b.add(derivation_on_word(a, t.word, images, -1), f.from_int(t.coef));
            if (!b.empty())
                fail("differential does not preserve the ideal: d(" + format_poly(p, r) + ") is nonzero in A");
        }
        GMap d = derivation_extend(a, images, -1);
        a.cx = complex_with(space, d);
        // a generator of degree 1 whose boundary has a unit component breaks the augmentation
        a.augmented = true;
        for (std::size_t g = 0; g < images.size(); ++g)
            if (p.gens[g].second == 1 && !images[g].get(a.unit).is_zero())
                a.augmented = false;
    }
    return make_algebra(std::move(a));
}

AlgebraP tensor_algebra(const SpaceP& v, int cutoff)
{
    Presentation p;
    bool pos = false, neg = false;
    for (int n : v->degrees()) {
        if (n == 0 && v->dim(0))
            fail("tensor algebra on a degree 0 generator: word count per degree would be infinite");
        for (const auto& l : v->labels(n)) {
            p.gens.emplace_back(l, n);
            (n > 0 ? pos : neg) = true;
        }
    }
    if (p.gens.empty()) {
        DGAlgebra a;
        SpaceP k = ground_space(v->field());
        a.cx = zero_complex(k);
        a.mul = GMap(tensor_space(k, k), k, 0);
        Mat one(1, 1);
        one.add(0, 0, v->field().one());
        a.mul.set(0, one);
        a.words = std::make_shared<WordBasis>();
        auto wb = std::make_shared<WordBasis>();
        wb->words[0].push_back({});
        wb->build_index();
        a.words = wb;
        return make_algebra(std::move(a));
    }
    if (pos && neg)
        fail("tensor algebra on generators of both signs");
    bool all_low = std::all_of(p.gens.begin(), p.gens.end(), [](const auto& g) { return g.second <= -2; });
    p.polarity = pos ? Polarity::p : (all_low ? Polarity::n : Polarity::none);
    p.cutoff = cutoff;
    return from_presentation(p, v->field());
}

AlgebraP opposite(const AlgebraP& a)
{
    DGAlgebra o = *a;
    o.mul = compose(a->mul, braid(a->mul.src()));
    o.mul = restrict_map(o.mul, a->mul.src(), a->space());
    return make_algebra(std::move(o));
}

AlgebraP tensor_product(const AlgebraP& a, const AlgebraP& b)
{
    const Field& f = a->field();
    Complex ab = tensor(a->cx, b->cx);
    const SpaceP& s = ab.space;
    if (!s->known(0))
        fail("tensor product is not determined in degree 0");
    SpaceP ss = tensor_space(s, s);
    GMap mul(ss, s, 0);
    for (int n : mul.domain()) {
        if (!ss->dim(n))
            continue;
        if (!s->known(n)) {
            mul.undefine(n);
            continue;
        }
        Mat m(s->dim(n), ss->dim(n));
        for (const auto& blk : ss->blocks(n))
            for (int u = 0; u < blk.left_dim; ++u) {
                auto [i, ia, ib] = s->tensor_split(blk.left_deg, u);
                int j = blk.left_deg - i;
                for (int v = 0; v < blk.right_dim; ++v) {
                    auto [k, ka, kb] = s->tensor_split(n - blk.left_deg, v);
                    int l = n - blk.left_deg - k;
                    SVec x = a->product(i, ia, k, ka), y = b->product(j, ib, l, kb);
                    VecBuilder out;
                    Scalar sg = koszul_sign(f, j, k);
                    for (const auto& [p, xp] : x)
                        for (const auto& [q, yq] : y)
                            out.add(s->tensor_index(n, i + k, p, q), sg * xp * yq);
                    m.set_col(blk.offset + u * blk.right_dim + v, out.build());
                }
            }
        mul.set(n, std::move(m));
    }
    DGAlgebra t;
    t.cx = ab;
    t.mul = std::move(mul);
    t.unit = s->tensor_index(0, 0, a->unit, b->unit);
    t.augmented = a->augmented && b->augmented;
    t.polarity = a->polarity == b->polarity ? a->polarity : Polarity::none;
    return make_algebra(std::move(t));
}

namespace {

SVec word_element(const DGAlgebra& a, const Word& w, std::size_t from, std::size_t to, int& deg)
{
    SVec e = a.unit_vec();
    deg = 0;
    for (std::size_t i = from; i < to && !e.empty(); ++i) {
        int x = w[i];
        int dx = a.words->letter_deg[static_cast<std::size_t>(x)];
        e = a.product(deg, e, dx, a.words->letter_vec[static_cast<std::size_t>(x)]);
        deg += dx;
    }
    if (e.empty())
        for (std::size_t i = from; i < to; ++i)
            deg += a.words->letter_deg[static_cast<std::size_t>(w[i])];
    return e;
}

}  // namespace

SVec derivation_on_word(const DGAlgebra& a, const Word& w, const std::vector<SVec>& images, int degree)
{
    if (!a.words)
        fail("derivation needs an algebra generated by letters");
    VecBuilder out;
    const Field& f = a.field();
    int before = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        int x = w[i];
        int dx = a.words->letter_deg[static_cast<std::size_t>(x)];
        const SVec& img = images[static_cast<std::size_t>(x)];
        if (!img.empty()) {
            int dl = 0, dr = 0;
            SVec l = word_element(a, w, 0, i, dl);
            SVec r = word_element(a, w, i + 1, w.size(), dr);
            SVec t = a.product(dl, l, dx + degree, img);
            t = a.product(dl + dx + degree, t, dr, r);
            out.add(t, koszul_sign(f, degree, before));
        }
        before += dx;
    }
    return out.build();
}

GMap derivation_extend(const DGAlgebra& a, const std::vector<SVec>& images, int degree)
{
    if (!a.words)
        fail("derivation needs an algebra generated by letters");
    const SpaceP& s = a.space();
    GMap d(s, s, degree);
    for (int n : d.domain()) {
        if (s->dim(n) == 0)
            continue;
        if (!s->known(n + degree) && s->dim(n)) {
            d.undefine(n);
            continue;
        }
        Mat m(s->dim(n + degree), s->dim(n));
        const auto& ws = a.words->words.at(n);
        for (int i = 0; i < s->dim(n); ++i)
            m.set_col(i, derivation_on_word(a, ws[static_cast<std::size_t>(i)], images, degree));
        d.set(n, std::move(m));
    }
    return d;
}

GMap extend_multiplicatively(const DGAlgebra& tv, const DGAlgebra& target, const std::vector<SVec>& images)
{
    if (!tv.words)
        fail("multiplicative extension needs an algebra generated by letters");
    GMap g(tv.space(), target.space(), 0);
    for (int n : g.domain()) {
        if (tv.space()->dim(n) == 0 || target.space()->dim(n) == 0)
            continue;
        if (!target.space()->known(n)) {
            g.undefine(n);
            continue;
        }
        Mat m(target.space()->dim(n), tv.space()->dim(n));
        const auto& ws = tv.words->words.at(n);
        for (int i = 0; i < tv.space()->dim(n); ++i) {
            SVec e = target.unit_vec();
            int deg = 0;
            for (int x : ws[static_cast<std::size_t>(i)]) {
                int dx = tv.words->letter_deg[static_cast<std::size_t>(x)];
                e = target.product(deg, e, dx, images[static_cast<std::size_t>(x)]);
                deg += dx;
            }
            m.set_col(i, e);
        }
        g.set(n, std::move(m));
    }
    return g;
}

void check_algebra_morphism(const GMap& g, const DGAlgebra& a, const DGAlgebra& b)
{
    if (g.deg() != 0)
        fail("algebra morphism must have degree 0");
    if (g.apply(0, a.unit_vec()) != b.unit_vec())
        fail("algebra morphism does not preserve the unit");
    GMap lhs = compose(g, a.mul);
    GMap rhs = compose(b.mul, tensor_map(g, g, a.mul.src()));
    if (auto n = first_difference(lhs, rhs)) {
        Mat l = lhs.block(*n), r = rhs.block(*n);
        for (int c = 0; c < l.cols(); ++c)
            if (l.col(c) != r.col(c))
                fail("not multiplicative on " + tensor_witness(*a.mul.src(), *n, c));
    }
    if (auto n = chain_map_defect(g, a.cx, b.cx))
        fail("algebra morphism is not a chain map in degree " + std::to_string(*n));
}

// ---------------------------------------------------------------- twisters

void check_twister(const Twister& t)
{
    const DGAlgebra& h = *t.host;
    SVec dt = h.cx.d.apply(-1, t.element);
    SVec sq = h.product(-1, t.element, -1, t.element);
    if (dt != sq)
        fail("twister identity d(t) = t^2 fails in degree -2");
}

Complex twist_module(const DGModule& u, const Twister& t)
{
    check_twister(t);
    const SpaceP& s = u.space();
    const Field& f = u.field();
    GMap lambda(s, s, -1);
    for (int n : lambda.domain()) {
        if (s->dim(n) == 0)
            continue;
        if (!u.act.defined(n - 1) || !s->known(n - 1)) {
            lambda.undefine(n);
            continue;
        }
        Mat m(s->dim(n - 1), s->dim(n));
        for (int i = 0; i < s->dim(n); ++i) {
            SVec v = u.act_on(-1, t.element, n, SVec::unit(i, f.one()));
            m.set_col(i, u.side == Side::left ? v : v.scaled(parity_sign(f, n)));
        }
        lambda.set(n, std::move(m));
    }
    GMap d = u.side == Side::left ? u.cx.d - lambda : u.cx.d + lambda;
    return complex_with(s, d);
}

}  // namespace kd
