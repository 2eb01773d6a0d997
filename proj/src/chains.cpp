#include "kd/chains.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace kd {

namespace {

long sat_add(long a, long b)
{
    if (a <= -kInf / 2 || b <= -kInf / 2)
        return -kInf;
    if (a >= kInf / 2 || b >= kInf / 2)
        return kInf;
    return a + b;
}

bool is_simple_label(const std::string& s)
{
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

[[noreturn]] void fail(const std::string& what) { throw StructuralError(what); }

}  // namespace

std::string Window::polarity() const
{
    if (below && above)
        return "finite";
    if (below)
        return "bounded-below";
    if (above)
        return "bounded-above";
    return "unbounded";
}

Window Window::capped(std::optional<int> lo_cap, std::optional<int> hi_cap) const
{
    Window w = *this;
    if (hi_cap && w.hi > *hi_cap) {
        w.hi = *hi_cap;
        w.above = false;
    }
    if (lo_cap && w.lo < *lo_cap) {
        w.lo = *lo_cap;
        w.below = false;
    }
    return w;
}

Window window_from_determined(long L, long H, std::optional<std::pair<int, int>> support)
{
    bool lo_inf = L <= -kInf / 2, hi_inf = H >= kInf / 2;
    if (!lo_inf && !hi_inf) {
        if (L > H)
            return {0, -1, false, false};
        return {static_cast<int>(L), static_cast<int>(H), false, false};
    }
    if (lo_inf && hi_inf) {
        if (support)
            return Window::finite(support->first, support->second);
        return Window::finite(0, -1);
    }
    if (lo_inf) {
        int h = static_cast<int>(H);
        int l = support && support->first <= h ? support->first : h + 1;
        return {l, h, true, false};
    }
    int l = static_cast<int>(L);
    int h = support && support->second >= l ? support->second : l - 1;
    return {l, h, false, true};
}

Space::Space(Field f, Window w, Basis basis) : field_(std::move(f)), window_(w)
{
    for (auto& [n, labels] : basis) {
        if (labels.empty())
            continue;
        if (!window_.known(n))
            fail("basis given in degree " + std::to_string(n) + " outside the known window");
        basis_.emplace(n, std::move(labels));
    }
}

int Space::dim(int n) const
{
    auto it = basis_.find(n);
    return it == basis_.end() ? 0 : static_cast<int>(it->second.size());
}

const std::vector<std::string>& Space::labels(int n) const
{
    static const std::vector<std::string> none;
    auto it = basis_.find(n);
    return it == basis_.end() ? none : it->second;
}

std::optional<int> Space::index_of(int n, const std::string& label) const
{
    const auto& l = labels(n);
    auto it = std::find(l.begin(), l.end(), label);
    if (it == l.end())
        return std::nullopt;
    return static_cast<int>(it - l.begin());
}

std::vector<int> Space::degrees() const
{
    std::vector<int> d;
    for (int n = window_.lo; n <= window_.hi; ++n)
        d.push_back(n);
    return d;
}

std::optional<std::pair<int, int>> Space::support() const
{
    if (basis_.empty())
        return std::nullopt;
    return std::make_pair(basis_.begin()->first, basis_.rbegin()->first);
}

int Space::total_dim() const
{
    int t = 0;
    for (const auto& [n, l] : basis_)
        t += static_cast<int>(l.size());
    return t;
}

std::optional<long> Space::min_possible() const
{
    if (!window_.below)
        return -kInf;
    if (auto s = support())
        return s->first;
    if (!window_.above)
        return window_.hi + 1L;
    return std::nullopt;
}

std::optional<long> Space::max_possible() const
{
    if (!window_.above)
        return kInf;
    if (auto s = support())
        return s->second;
    if (!window_.below)
        return window_.lo - 1L;
    return std::nullopt;
}

const std::vector<TensorBlock>& Space::blocks(int n) const
{
    static const std::vector<TensorBlock> none;
    auto it = layout_.find(n);
    return it == layout_.end() ? none : it->second;
}

int Space::tensor_index(int n, int left_deg, int a, int b) const
{
    for (const auto& blk : blocks(n))
        if (blk.left_deg == left_deg)
            return blk.offset + a * blk.right_dim + b;
    fail("tensor index outside the layout in degree " + std::to_string(n));
}

std::tuple<int, int, int> Space::tensor_split(int n, int idx) const
{
    for (const auto& blk : blocks(n)) {
        int size = blk.left_dim * blk.right_dim;
        if (idx >= blk.offset && idx < blk.offset + size) {
            int r = idx - blk.offset;
            return {blk.left_deg, r / blk.right_dim, r % blk.right_dim};
        }
    }
    fail("tensor split outside the layout in degree " + std::to_string(n));
}

SpaceP make_space(const Field& f, Window w, Basis basis)
{
    return std::make_shared<Space>(f, w, std::move(basis));
}

SpaceP ground_space(const Field& f) { return make_space(f, Window::finite(0, 0), {{0, {"1"}}}); }

SpaceP zero_space(const Field& f) { return make_space(f, Window::finite(0, -1), {}); }

SpaceP tensor_space(const SpaceP& u, const SpaceP& v, std::optional<int> lo_cap, std::optional<int> hi_cap)
{
    Window w;
    auto umin = u->min_possible(), vmin = v->min_possible();
    if (!umin || !vmin) {
        w = Window::finite(0, -1);
    } else {
        long L = -kInf, H = kInf;
        const Window &wu = u->window(), &wv = v->window();
        if (!wu.above)
            H = std::min(H, sat_add(wu.hi + 1L, *vmin) - 1);
        if (!wv.above)
            H = std::min(H, sat_add(wv.hi + 1L, *umin) - 1);
        if (!wu.below)
            L = std::max(L, sat_add(wu.lo - 1L, *v->max_possible()) + 1);
        if (!wv.below)
            L = std::max(L, sat_add(wv.lo - 1L, *u->max_possible()) + 1);
        std::optional<std::pair<int, int>> sup;
        auto su = u->support(), sv = v->support();
        if (su && sv)
            sup = std::make_pair(su->first + sv->first, su->second + sv->second);
        w = window_from_determined(L, H, sup);
    }
    w = w.capped(lo_cap, hi_cap);

    Basis basis;
    std::map<int, std::vector<TensorBlock>> layout;
    for (int n = w.lo; n <= w.hi; ++n) {
        std::vector<std::string> labels;
        std::vector<TensorBlock> blks;
        int off = 0;
        for (int i = u->window().lo; i <= u->window().hi; ++i) {
            int du = u->dim(i);
            if (!du)
                continue;
            int j = n - i;
            if (!v->determined(j))
                fail("tensor window inconsistency at degree " + std::to_string(n));
            int dv = v->dim(j);
            if (!dv)
                continue;
            blks.push_back({i, off, du, dv});
            off += du * dv;
            for (const auto& a : u->labels(i))
                for (const auto& b : v->labels(j))
                    labels.push_back(a + "|" + b);
        }
        if (!labels.empty()) {
            basis.emplace(n, std::move(labels));
            layout.emplace(n, std::move(blks));
        }
    }
    auto s = std::make_shared<Space>(u->field(), w, std::move(basis));
    s->left_ = u;
    s->right_ = v;
    s->layout_ = std::move(layout);
    return s;
}

std::string dual_label(const std::string& label)
{
    return is_simple_label(label) ? label + "*" : "(" + label + ")*";
}

SpaceP dual_space(const SpaceP& u)
{
    Basis b;
    for (int n = u->window().lo; n <= u->window().hi; ++n) {
        std::vector<std::string> l;
        for (const auto& x : u->labels(n))
            l.push_back(dual_label(x));
        if (!l.empty())
            b.emplace(-n, std::move(l));
    }
    return make_space(u->field(), u->window().dual(), std::move(b));
}

SpaceP shift_space(const SpaceP& u, int s)
{
    if (s == 0)
        return u;
    std::string pre = s == 1 ? "s(" : "s^" + std::to_string(s) + "(";
    Basis b;
    for (int n = u->window().lo; n <= u->window().hi; ++n) {
        std::vector<std::string> l;
        for (const auto& x : u->labels(n))
            l.push_back(pre + x + ")");
        if (!l.empty())
            b.emplace(n + s, std::move(l));
    }
    return make_space(u->field(), u->window().shifted(s), std::move(b));
}

SpaceP sum_space(const SpaceP& u, const SpaceP& v)
{
    long L = std::max(u->window().det_lo(), v->window().det_lo());
    long H = std::min(u->window().det_hi(), v->window().det_hi());
    auto su = u->support(), sv = v->support();
    std::optional<std::pair<int, int>> sup = su ? su : sv;
    if (su && sv)
        sup = std::make_pair(std::min(su->first, sv->first), std::max(su->second, sv->second));
    Window w = window_from_determined(L, H, sup);
    Basis b;
    for (int n = w.lo; n <= w.hi; ++n) {
        std::vector<std::string> l = u->labels(n);
        const auto& r = v->labels(n);
        l.insert(l.end(), r.begin(), r.end());
        if (!l.empty())
            b.emplace(n, std::move(l));
    }
    return make_space(u->field(), w, std::move(b));
}

SpaceP restrict_space(const SpaceP& u, Window w)
{
    Basis b;
    for (int n = w.lo; n <= w.hi; ++n) {
        if (!u->determined(n))
            fail("restriction outside the determined range at degree " + std::to_string(n));
        if (u->dim(n))
            b.emplace(n, u->labels(n));
    }
    return make_space(u->field(), w, std::move(b));
}

bool same_shape(const Space& a, const Space& b)
{
    int lo = std::max(a.window().lo, b.window().lo), hi = std::min(a.window().hi, b.window().hi);
    for (int n = lo; n <= hi; ++n)
        if (a.dim(n) != b.dim(n))
            return false;
    return true;
}

GMap::GMap(SpaceP src, SpaceP tgt, int deg) : src_(std::move(src)), tgt_(std::move(tgt)), deg_(deg)
{
    for (int n = src_->window().lo; n <= src_->window().hi; ++n)
        if (tgt_->determined(n + deg_))
            blocks_.emplace(n, Mat(tgt_->dim(n + deg_), src_->dim(n)));
}

Mat GMap::block(int n) const
{
    auto it = blocks_.find(n);
    if (it != blocks_.end())
        return it->second;
    return Mat(tgt_->dim(n + deg_), src_->dim(n));
}

void GMap::set(int n, Mat m)
{
    if (m.rows() != tgt_->dim(n + deg_) || m.cols() != src_->dim(n))
        fail("block shape mismatch at degree " + std::to_string(n));
    if (!src_->known(n) || !tgt_->determined(n + deg_))
        fail("block outside the map window at degree " + std::to_string(n));
    blocks_[n] = std::move(m);
}

SVec GMap::apply(int n, const SVec& v) const
{
    if (v.empty())
        return {};
    auto it = blocks_.find(n);
    if (it == blocks_.end())
        fail("map applied outside its window at degree " + std::to_string(n));
    return it->second * v;
}

std::vector<int> GMap::domain() const
{
    std::vector<int> d;
    for (const auto& [n, m] : blocks_)
        d.push_back(n);
    return d;
}

GMap identity_map(const SpaceP& s)
{
    GMap f(s, s, 0);
    for (int n : f.domain())
        f.set(n, Mat::identity(s->dim(n), s->field()));
    return f;
}

GMap compose(const GMap& f, const GMap& g)
{
    if (!same_shape(*g.tgt(), *f.src()))
        fail("composition of maps with mismatched spaces");
    GMap r(g.src(), f.tgt(), f.deg() + g.deg());
    for (int n : r.domain()) {
        if (!g.defined(n)) {
            r.undefine(n);
            continue;
        }
        int m = n + g.deg();
        const Mat& gb = g.blocks().at(n);
        if (gb.is_zero())
            continue;
        if (!f.defined(m)) {
            r.undefine(n);
            continue;
        }
        r.set(n, f.blocks().at(m) * gb);
    }
    return r;
}

static GMap combine(const GMap& f, const GMap& g, bool subtract)
{
    if (f.deg() != g.deg() || !same_shape(*f.src(), *g.src()) || !same_shape(*f.tgt(), *g.tgt()))
        fail("sum of incompatible maps");
    GMap r(f.src(), f.tgt(), f.deg());
    for (int n : r.domain()) {
        if (!f.defined(n) || !g.defined(n)) {
            r.undefine(n);
            continue;
        }
        r.set(n, subtract ? f.blocks().at(n) - g.blocks().at(n) : f.blocks().at(n) + g.blocks().at(n));
    }
    return r;
}

GMap operator+(const GMap& f, const GMap& g) { return combine(f, g, false); }
GMap operator-(const GMap& f, const GMap& g) { return combine(f, g, true); }

GMap scaled(const GMap& f, const Scalar& s)
{
    GMap r(f.src(), f.tgt(), f.deg());
    for (int n : r.domain()) {
        if (!f.defined(n))
            r.undefine(n);
        else
            r.set(n, f.blocks().at(n).scaled(s));
    }
    return r;
}

GMap restrict_map(const GMap& f, const SpaceP& src, const SpaceP& tgt)
{
    if (!same_shape(*f.src(), *src) || !same_shape(*f.tgt(), *tgt))
        fail("restriction to spaces of a different shape");
    GMap r(src, tgt, f.deg());
    for (int n : r.domain()) {
        if (f.defined(n) && f.src()->known(n))
            r.set(n, f.blocks().at(n));
        else if (src->dim(n) == 0 || tgt->dim(n + f.deg()) == 0)
            continue;
        else
            r.undefine(n);
    }
    return r;
}

GMap tensor_map(const GMap& f, const GMap& g, const SpaceP& src_in, const SpaceP& tgt_in)
{
    SpaceP src = src_in ? src_in : tensor_space(f.src(), g.src());
    SpaceP tgt = tgt_in ? tgt_in : tensor_space(f.tgt(), g.tgt());
    const Field& fld = f.field();
    GMap r(src, tgt, f.deg() + g.deg());
    for (int n : r.domain()) {
        int m = n + r.deg();
        Mat out(tgt->dim(m), src->dim(n));
        bool ok = true;
        for (const auto& blk : src->blocks(n)) {
            int i = blk.left_deg, j = n - i;
            Scalar sgn = koszul_sign(fld, g.deg(), i);
            bool fd = f.defined(i), gd = g.defined(j);
            if (!fd && !gd) {
                ok = false;
                break;
            }
            Mat fb = f.block(i), gb = g.block(j);
            for (int a = 0; a < blk.left_dim; ++a) {
                const SVec& fu = fb.col(a);
                for (int b = 0; b < blk.right_dim; ++b) {
                    const SVec& gv = gb.col(b);
                    if ((fd && fu.empty()) || (gd && gv.empty()))
                        continue;
                    if (!fd || !gd) {
                        ok = false;
                        break;
                    }
                    VecBuilder col;
                    for (const auto& [a2, x] : fu)
                        for (const auto& [b2, y] : gv)
                            col.add(tgt->tensor_index(m, i + f.deg(), a2, b2), sgn * x * y);
                    out.set_col(blk.offset + a * blk.right_dim + b, col.build());
                }
                if (!ok)
                    break;
            }
            if (!ok)
                break;
        }
        if (ok)
            r.set(n, std::move(out));
        else
            r.undefine(n);
    }
    return r;
}

GMap dual_map(const GMap& f)
{
    const Field& fld = f.field();
    GMap r(dual_space(f.tgt()), dual_space(f.src()), f.deg());
    int p = f.deg();
    for (int n : r.domain()) {
        // n = -j for functionals on V_j
        int j = -n;
        if (r.src()->dim(n) == 0 || r.tgt()->dim(n + p) == 0)
            continue;
        if (!f.defined(j - p)) {
            r.undefine(n);
            continue;
        }
        r.set(n, f.blocks().at(j - p).transposed().scaled(koszul_sign(fld, p, j)));
    }
    return r;
}

std::optional<int> first_difference(const GMap& f, const GMap& g)
{
    for (const auto& [n, m] : f.blocks()) {
        if (!g.defined(n))
            continue;
        if (m != g.blocks().at(n))
            return n;
    }
    return std::nullopt;
}

bool is_zero_map(const GMap& f)
{
    return std::all_of(f.blocks().begin(), f.blocks().end(), [](const auto& kv) { return kv.second.is_zero(); });
}

GMap assoc(const SpaceP& uv_w)
{
    if (!uv_w->is_tensor() || !uv_w->left()->is_tensor())
        fail("assoc needs a space of the form (U|V)|W");
    const SpaceP& uv = uv_w->left();
    const SpaceP &u = uv->left(), &v = uv->right(), &w = uv_w->right();
    SpaceP vw = tensor_space(v, w);
    SpaceP tgt = tensor_space(u, vw);
    const Field& fld = u->field();
    GMap r(uv_w, tgt, 0);
    for (int n : r.domain()) {
        if (!tgt->known(n) && uv_w->dim(n)) {
            r.undefine(n);
            continue;
        }
        Mat m(tgt->dim(n), uv_w->dim(n));
        for (const auto& blk : uv_w->blocks(n)) {
            int iuv = blk.left_deg, iw = n - iuv;
            for (int x = 0; x < blk.left_dim; ++x) {
                auto [iu, a, b] = uv->tensor_split(iuv, x);
                int iv = iuv - iu;
                for (int c = 0; c < blk.right_dim; ++c) {
                    int y = vw->tensor_index(iv + iw, iv, b, c);
                    m.set_col(blk.offset + x * blk.right_dim + c,
                              SVec::unit(tgt->tensor_index(n, iu, a, y), fld.one()));
                }
            }
        }
        r.set(n, std::move(m));
    }
    return r;
}

GMap assoc_inv(const SpaceP& u_vw)
{
    if (!u_vw->is_tensor() || !u_vw->right()->is_tensor())
        fail("assoc_inv needs a space of the form U|(V|W)");
    const SpaceP &u = u_vw->left(), &v = u_vw->right()->left(), &w = u_vw->right()->right();
    SpaceP uv_w = tensor_space(tensor_space(u, v), w);
    GMap a = assoc(uv_w);
    GMap r(u_vw, uv_w, 0);
    for (int n : r.domain()) {
        if (!a.defined(n) || !same_shape(*a.tgt(), *u_vw) || a.tgt()->dim(n) != u_vw->dim(n)) {
            r.undefine(n);
            continue;
        }
        r.set(n, a.blocks().at(n).transposed());
    }
    return r;
}

GMap braid(const SpaceP& uv)
{
    if (!uv->is_tensor())
        fail("braid needs a tensor space");
    const SpaceP &u = uv->left(), &v = uv->right();
    SpaceP vu = tensor_space(v, u);
    const Field& fld = u->field();
    GMap r(uv, vu, 0);
    for (int n : r.domain()) {
        if (uv->dim(n) && !vu->known(n)) {
            r.undefine(n);
            continue;
        }
        Mat m(vu->dim(n), uv->dim(n));
        for (const auto& blk : uv->blocks(n)) {
            int i = blk.left_deg, j = n - i;
            for (int a = 0; a < blk.left_dim; ++a)
                for (int b = 0; b < blk.right_dim; ++b)
                    m.set_col(blk.offset + a * blk.right_dim + b,
                              SVec::unit(vu->tensor_index(n, j, b, a), koszul_sign(fld, i, j)));
        }
        r.set(n, std::move(m));
    }
    return r;
}

GMap unit_left(const SpaceP& k_u)
{
    const SpaceP& u = k_u->right();
    GMap r(k_u, u, 0);
    for (int n : r.domain())
        if (k_u->dim(n))
            r.set(n, Mat::identity(u->dim(n), u->field()));
    return r;
}

GMap unit_left_inv(const SpaceP& u)
{
    SpaceP k_u = tensor_space(ground_space(u->field()), u);
    GMap r(u, k_u, 0);
    for (int n : r.domain())
        if (u->dim(n))
            r.set(n, Mat::identity(u->dim(n), u->field()));
    return r;
}

GMap unit_right(const SpaceP& u_k)
{
    const SpaceP& u = u_k->left();
    GMap r(u_k, u, 0);
    for (int n : r.domain())
        if (u_k->dim(n))
            r.set(n, Mat::identity(u->dim(n), u->field()));
    return r;
}

GMap unit_right_inv(const SpaceP& u)
{
    SpaceP u_k = tensor_space(u, ground_space(u->field()));
    GMap r(u, u_k, 0);
    for (int n : r.domain())
        if (u->dim(n))
            r.set(n, Mat::identity(u->dim(n), u->field()));
    return r;
}

Complex make_complex(SpaceP s, std::map<int, Mat> diff)
{
    GMap d(s, s, -1);
    for (auto& [n, m] : diff)
        d.set(n, std::move(m));
    Complex x{std::move(s), std::move(d)};
    check_d2(x);
    return x;
}

Complex complex_with(SpaceP s, GMap d)
{
    Complex x{s, restrict_map(d, s, s)};
    check_d2(x);
    return x;
}

Complex zero_complex(SpaceP s)
{
    GMap d(s, s, -1);
    return {std::move(s), std::move(d)};
}

void check_d2(const Complex& x)
{
    for (const auto& [n, m] : x.d.blocks()) {
        if (!x.d.defined(n - 1) || m.is_zero())
            continue;
        Mat sq = x.d.blocks().at(n - 1) * m;
        for (int c = 0; c < sq.cols(); ++c) {
            if (sq.col(c).empty())
                continue;
            int r = sq.col(c).entries().front().first;
            std::ostringstream os;
            os << "d^2 != 0 at degree " << n << ": basis pair (" << x.space->labels(n)[static_cast<std::size_t>(c)]
               << ", " << x.space->labels(n - 2)[static_cast<std::size_t>(r)] << ")";
            fail(os.str());
        }
    }
}

std::optional<int> chain_map_defect(const GMap& f, const Complex& x, const Complex& y)
{
    GMap lhs = compose(y.d, f);
    GMap rhs = scaled(compose(f, x.d), parity_sign(f.field(), f.deg()));
    return first_difference(lhs, rhs);
}

void check_chain_map(const GMap& f, const Complex& x, const Complex& y)
{
    auto bad = chain_map_defect(f, x, y);
    if (!bad)
        return;
    int n = *bad;
    Mat diff = compose(y.d, f).block(n) - scaled(compose(f, x.d), parity_sign(f.field(), f.deg())).block(n);
    for (int c = 0; c < diff.cols(); ++c)
        if (!diff.col(c).empty())
            fail("not a chain map at degree " + std::to_string(n) + ": witness basis element " +
                 x.space->labels(n)[static_cast<std::size_t>(c)]);
    fail("not a chain map at degree " + std::to_string(n));
}

Complex shift(const Complex& x, int s)
{
    SpaceP sp = shift_space(x.space, s);
    GMap d(sp, sp, -1);
    Scalar sg = parity_sign(x.field(), s);
    for (int n : d.domain()) {
        if (x.d.defined(n - s))
            d.set(n, x.d.blocks().at(n - s).scaled(sg));
        else
            d.undefine(n);
    }
    return {sp, d};
}

GMap tensor_differential(const Complex& u, const Complex& v, const SpaceP& uv)
{
    return tensor_map(u.d, identity_map(v.space), uv, uv) + tensor_map(identity_map(u.space), v.d, uv, uv);
}

Complex tensor(const Complex& u, const Complex& v, std::optional<int> lo_cap, std::optional<int> hi_cap)
{
    SpaceP uv = tensor_space(u.space, v.space, lo_cap, hi_cap);
    return complex_with(uv, tensor_differential(u, v, uv));
}

Complex dual(const Complex& x)
{
    SpaceP s = dual_space(x.space);
    return complex_with(s, scaled(dual_map(x.d), -x.field().one()));
}

Complex direct_sum(const Complex& x, const Complex& y)
{
    SpaceP s = sum_space(x.space, y.space);
    GMap d(s, s, -1);
    for (int n : d.domain()) {
        int dx = x.space->dim(n), dy = y.space->dim(n);
        if ((dx && !x.d.defined(n)) || (dy && !y.d.defined(n))) {
            d.undefine(n);
            continue;
        }
        int ox = x.space->dim(n - 1);
        Mat m(s->dim(n - 1), s->dim(n));
        for (int c = 0; c < dx; ++c)
            m.set_col(c, x.d.block(n).col(c));
        for (int c = 0; c < dy; ++c)
            m.set_col(dx + c, y.d.block(n).col(c).offset(ox));
        d.set(n, std::move(m));
    }
    return complex_with(s, d);
}

std::map<int, int> hom_offsets(const Space& u, const Space& v, int p)
{
    std::map<int, int> off;
    int o = 0;
    for (int i = u.window().lo; i <= u.window().hi; ++i) {
        int du = u.dim(i), dv = v.dim(i + p);
        if (!du || !dv)
            continue;
        off[i] = o;
        o += du * dv;
    }
    return off;
}

Complex hom_complex(const Complex& u, const Complex& v)
{
    SpaceP shape = tensor_space(dual_space(u.space), v.space);
    Window w = shape->window();
    Basis b;
    for (int p = w.lo; p <= w.hi; ++p) {
        std::vector<std::string> l;
        for (const auto& [i, o] : hom_offsets(*u.space, *v.space, p))
            for (const auto& a : u.space->labels(i))
                for (const auto& c : v.space->labels(i + p))
                    l.push_back("hom(" + a + "," + c + ")");
        if (!l.empty())
            b.emplace(p, std::move(l));
    }
    SpaceP hs = make_space(u.field(), w, std::move(b));
    const Field& fld = u.field();
    GMap d(hs, hs, -1);
    for (int p : d.domain()) {
        if (!hs->dim(p))
            continue;
        auto off = hom_offsets(*u.space, *v.space, p);
        auto off1 = hom_offsets(*u.space, *v.space, p - 1);
        Mat m(hs->dim(p - 1), hs->dim(p));
        bool ok = true;
        Scalar sg = -parity_sign(fld, p);
        for (const auto& [i, o] : off) {
            int du = u.space->dim(i), dv = v.space->dim(i + p);
            bool need_v = v.space->dim(i + p - 1) > 0, need_u = u.space->dim(i + 1) > 0;
            if ((need_v && !v.d.defined(i + p)) || (need_u && !u.d.defined(i + 1))) {
                ok = false;
                break;
            }
            Mat dvb = v.d.block(i + p);
            Mat dut = u.d.block(i + 1).transposed();
            for (int a = 0; a < du; ++a)
                for (int c = 0; c < dv; ++c) {
                    VecBuilder col;
                    // d^V after e
                    for (const auto& [c2, x] : dvb.col(c))
                        col.add(off1.at(i) + a * v.space->dim(i + p - 1) + c2, x);
                    // e after d^U
                    for (const auto& [a2, x] : dut.col(a))
                        col.add(off1.at(i + 1) + a2 * dv + c, sg * x);
                    m.set_col(o + a * dv + c, col.build());
                }
        }
        if (ok)
            d.set(p, std::move(m));
        else
            d.undefine(p);
    }
    return complex_with(hs, d);
}

SVec hom_element(const SpaceP& u, const SpaceP& v, const GMap& f, int p)
{
    if (f.deg() != p)
        fail("hom_element: degree mismatch");
    VecBuilder out;
    for (const auto& [i, o] : hom_offsets(*u, *v, p)) {
        if (!f.defined(i))
            fail("hom_element: map undefined at degree " + std::to_string(i));
        Mat blk = f.blocks().at(i);
        int dv = v->dim(i + p);
        for (int a = 0; a < blk.cols(); ++a)
            for (const auto& [c, x] : blk.col(a))
                out.add(o + a * dv + c, x);
    }
    return out.build();
}

GMap hom_map(const SpaceP& u, const SpaceP& v, int p, const SVec& x)
{
    GMap f(u, v, p);
    auto off = hom_offsets(*u, *v, p);
    std::map<int, Mat> blocks;
    for (const auto& [idx, val] : x) {
        auto it = std::prev(std::find_if(off.begin(), off.end(), [&](const auto& kv) { return kv.second > idx; }));
        int i = it->first, r = idx - it->second, dv = v->dim(i + p);
        auto [bi, fresh] = blocks.try_emplace(i, Mat(dv, u->dim(i)));
        bi->second.add(r % dv, r / dv, val);
    }
    for (auto& [i, m] : blocks)
        f.set(i, std::move(m));
    return f;
}

GMap varpi(const SpaceP& u, const SpaceP& v)
{
    SpaceP src = tensor_space(dual_space(u), dual_space(v));
    SpaceP uv = tensor_space(u, v);
    SpaceP tgt = dual_space(uv);
    const Field& fld = u->field();
    GMap r(src, tgt, 0);
    for (int n : r.domain()) {
        if (!src->dim(n))
            continue;
        if (!tgt->known(n)) {
            r.undefine(n);
            continue;
        }
        Mat m(tgt->dim(n), src->dim(n));
        for (const auto& blk : src->blocks(n)) {
            int i = -blk.left_deg, j = -n - i;  // u in U_i, v in V_j
            for (int a = 0; a < blk.left_dim; ++a)
                for (int b = 0; b < blk.right_dim; ++b)
                    m.set_col(blk.offset + a * blk.right_dim + b,
                              SVec::unit(uv->tensor_index(-n, i, a, b), koszul_sign(fld, i, j)));
        }
        r.set(n, std::move(m));
    }
    return r;
}

GMap delta_embed(const Complex& u, const Complex& v)
{
    Complex h = hom_complex(u, v);
    Complex du = dual(u), dv = dual(v);
    Complex h2 = hom_complex(dv, du);
    const Field& fld = u.field();
    GMap r(h.space, h2.space, 0);
    for (int p : r.domain()) {
        if (!h.space->dim(p))
            continue;
        if (!h2.space->known(p)) {
            r.undefine(p);
            continue;
        }
        auto off = hom_offsets(*u.space, *v.space, p);
        auto off2 = hom_offsets(*dv.space, *du.space, p);
        Mat m(h2.space->dim(p), h.space->dim(p));
        for (const auto& [i, o] : off) {
            int du_i = u.space->dim(i), dv_ip = v.space->dim(i + p);
            int o2 = off2.at(-(i + p));
            Scalar sg = koszul_sign(fld, p, i + p);
            for (int a = 0; a < du_i; ++a)
                for (int c = 0; c < dv_ip; ++c)
                    m.set_col(o + a * dv_ip + c, SVec::unit(o2 + c * du_i + a, sg));
        }
        r.set(p, std::move(m));
    }
    return r;
}

Homology::Homology(const Complex& x) : x_(x)
{
    const Field& fld = x.field();
    const Space& s = *x.space;
    for (int n = s.window().lo; n <= s.window().hi; ++n) {
        Level lv;
        lv.span = std::make_shared<Reducer>(fld);
        bool d_ok = x.d.defined(n) || s.dim(n) == 0;
        bool up_ok = !s.known(n + 1) ? s.determined(n + 1) : (x.d.defined(n + 1) || s.dim(n + 1) == 0);
        if (s.known(n + 1) && x.d.defined(n + 1)) {
            Mat up = x.d.blocks().at(n + 1);
            for (int c = 0; c < up.cols(); ++c)
                lv.span->insert(up.col(c));
            lv.boundary_inputs = up.cols();
        }
        std::vector<SVec> cycles;
        if (x.d.defined(n)) {
            cycles = kernel(x.d.blocks().at(n), fld);
        } else {
            for (int i = 0; i < s.dim(n); ++i)
                cycles.push_back(SVec::unit(i, fld.one()));
        }
        for (auto& z : cycles)
            if (lv.span->insert(z))
                lv.reps.push_back(z);
        lv.rank = static_cast<int>(lv.reps.size());
        lv.certified = s.determined(n - 1) && s.determined(n + 1) && d_ok && up_ok;
        levels_.emplace(n, std::move(lv));
    }
}

std::vector<int> Homology::degrees() const
{
    std::vector<int> d;
    for (const auto& [n, l] : levels_)
        d.push_back(n);
    return d;
}

int Homology::rank(int n) const
{
    auto it = levels_.find(n);
    return it == levels_.end() ? 0 : it->second.rank;
}

bool Homology::certified(int n) const
{
    auto it = levels_.find(n);
    if (it != levels_.end())
        return it->second.certified;
    const Space& s = *x_.space;
    return s.determined(n - 1) && s.determined(n) && s.determined(n + 1);
}

const std::vector<SVec>& Homology::reps(int n) const
{
    static const std::vector<SVec> none;
    auto it = levels_.find(n);
    return it == levels_.end() ? none : it->second.reps;
}

std::map<int, int> Homology::ranks() const
{
    std::map<int, int> r;
    for (const auto& [n, l] : levels_)
        r[n] = l.rank;
    return r;
}

bool Homology::is_cycle(int n, const SVec& z) const
{
    if (z.empty())
        return true;
    return x_.d.apply(n, z).empty();
}

std::optional<SVec> Homology::classify(int n, const SVec& z) const
{
    auto it = levels_.find(n);
    if (it == levels_.end() || !is_cycle(n, z))
        return std::nullopt;
    auto sol = it->second.span->solve(z);
    if (!sol)
        return std::nullopt;
    std::vector<SVec::Entry> e;
    for (const auto& [i, c] : *sol)
        if (i >= it->second.boundary_inputs)
            e.emplace_back(i - it->second.boundary_inputs, c);
    return SVec::from_sorted(std::move(e));
}

std::optional<SVec> Homology::bound(int n, const SVec& z) const
{
    auto it = levels_.find(n);
    if (it == levels_.end())
        return std::nullopt;
    auto sol = it->second.span->solve(z);
    if (!sol)
        return std::nullopt;
    std::vector<SVec::Entry> e;
    for (const auto& [i, c] : *sol) {
        if (i >= it->second.boundary_inputs)
            return std::nullopt;
        e.emplace_back(i, c);
    }
    return SVec::from_sorted(std::move(e));
}

Complex cone(const GMap& f, const Complex& x, const Complex& y)
{
    if (f.deg() != 0)
        fail("cone of a map of nonzero degree");
    SpaceP sx = shift_space(x.space, 1);
    SpaceP s = sum_space(sx, y.space);
    GMap d(s, s, -1);
    for (int n : d.domain()) {
        int dx = x.space->dim(n - 1), dy = y.space->dim(n), ox = x.space->dim(n - 2);
        if ((dx && (!x.d.defined(n - 1) || !f.defined(n - 1))) || (dy && !y.d.defined(n))) {
            d.undefine(n);
            continue;
        }
        Mat m(s->dim(n - 1), s->dim(n));
        Mat dxb = x.d.block(n - 1), fb = f.block(n - 1), dyb = y.d.block(n);
        for (int c = 0; c < dx; ++c)
            m.set_col(c, -dxb.col(c) + fb.col(c).offset(ox));
        for (int c = 0; c < dy; ++c)
            m.set_col(dx + c, dyb.col(c).offset(ox));
        d.set(n, std::move(m));
    }
    return complex_with(s, d);
}

bool QuasiIsoVerdict::all_certified_iso() const
{
    for (const auto& [n, ok] : iso)
        if (certified.at(n) && !ok)
            return false;
    return true;
}

std::optional<int> QuasiIsoVerdict::first_failure() const
{
    for (const auto& [n, ok] : iso)
        if (certified.at(n) && !ok)
            return n;
    return std::nullopt;
}

QuasiIsoVerdict quasi_iso_check(const GMap& f, const Complex& x, const Complex& y)
{
    check_chain_map(f, x, y);
    Complex c = cone(f, x, y);
    Homology h(c);
    QuasiIsoVerdict v;
    for (int n = c.space->window().lo; n <= c.space->window().hi; ++n) {
        if (!y.space->known(n) && !x.space->known(n))
            continue;
        v.iso[n] = h.rank(n) == 0 && h.rank(n + 1) == 0;
        v.certified[n] = h.certified(n) && h.certified(n + 1);
    }
    return v;
}

}  // namespace kd
