#include "kd/linalg.hpp"

#include <algorithm>

namespace kd {

SVec SVec::from_sorted(std::vector<Entry> entries)
{
    SVec v;
    v.e_.reserve(entries.size());
    for (auto& x : entries)
        if (!x.second.is_zero())
            v.e_.push_back(std::move(x));
    return v;
}

Scalar SVec::get(int i) const
{
    auto it = std::lower_bound(e_.begin(), e_.end(), i,
                               [](const Entry& x, int k) { return x.first < k; });
    if (it != e_.end() && it->first == i)
        return it->second;
    return Scalar{};
}

Scalar SVec::one_like(const SVec& v)
{
    if (v.empty())
        return Scalar{};
    const Scalar& s = v.e_.front().second;
    return s * s.inv();
}

void SVec::axpy(const Scalar& a, const SVec& x)
{
    if (x.empty() || a.is_zero())
        return;
    std::vector<Entry> out;
    out.reserve(e_.size() + x.e_.size());
    auto i = e_.begin();
    auto j = x.e_.begin();
    while (i != e_.end() || j != x.e_.end()) {
        if (j == x.e_.end() || (i != e_.end() && i->first < j->first)) {
            out.push_back(std::move(*i++));
        } else if (i == e_.end() || j->first < i->first) {
            out.emplace_back(j->first, a * j->second);
            ++j;
        } else {
            Scalar s = i->second + a * j->second;
            if (!s.is_zero())
                out.emplace_back(i->first, std::move(s));
            ++i;
            ++j;
        }
    }
    e_ = std::move(out);
}

SVec SVec::scaled(const Scalar& a) const
{
    if (a.is_zero())
        return {};
    SVec r = *this;
    for (auto& x : r.e_)
        x.second = x.second * a;
    return r;
}

SVec SVec::operator-() const
{
    SVec r = *this;
    for (auto& x : r.e_)
        x.second = -x.second;
    return r;
}

SVec SVec::offset(int off) const
{
    SVec r = *this;
    for (auto& x : r.e_)
        x.first += off;
    return r;
}

void VecBuilder::add(int i, const Scalar& s)
{
    if (s.is_zero())
        return;
    auto [it, fresh] = m_.try_emplace(i, s);
    if (!fresh) {
        it->second += s;
        if (it->second.is_zero())
            m_.erase(it);
    }
}

void VecBuilder::add(const SVec& v, const Scalar& s, int offset)
{
    for (const auto& [i, x] : v)
        add(i + offset, x * s);
}

SVec VecBuilder::build() const
{
    std::vector<SVec::Entry> e(m_.begin(), m_.end());
    return SVec::from_sorted(std::move(e));
}

Mat Mat::identity(int n, const Field& f)
{
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        m.set_col(i, SVec::unit(i, f.one()));
    return m;
}

void Mat::add(int r, int c, const Scalar& s)
{
    if (s.is_zero())
        return;
    col_[static_cast<std::size_t>(c)].axpy(s, SVec::unit(r, s * s.inv()));
}

bool Mat::is_zero() const
{
    return std::all_of(col_.begin(), col_.end(), [](const SVec& v) { return v.empty(); });
}

std::size_t Mat::nnz() const
{
    std::size_t n = 0;
    for (const auto& c : col_)
        n += c.size();
    return n;
}

SVec Mat::operator*(const SVec& v) const
{
    VecBuilder b;
    for (const auto& [j, x] : v)
        b.add(col(j), x);
    return b.build();
}

Mat Mat::operator*(const Mat& o) const
{
    if (cols_ != o.rows_)
        throw std::logic_error("matrix shape mismatch in product");
    Mat r(rows_, o.cols_);
    for (int j = 0; j < o.cols_; ++j)
        r.set_col(j, *this * o.col(j));
    return r;
}

Mat Mat::operator+(const Mat& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::logic_error("matrix shape mismatch in sum");
    Mat r = *this;
    for (int j = 0; j < cols_; ++j)
        if (!o.col(j).empty())
            r.col_[static_cast<std::size_t>(j)] = col(j) + o.col(j);
    return r;
}

Mat Mat::operator-(const Mat& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::logic_error("matrix shape mismatch in difference");
    Mat r = *this;
    for (int j = 0; j < cols_; ++j)
        if (!o.col(j).empty())
            r.col_[static_cast<std::size_t>(j)] = col(j) - o.col(j);
    return r;
}

Mat Mat::scaled(const Scalar& s) const
{
    Mat r(rows_, cols_);
    for (int j = 0; j < cols_; ++j)
        r.set_col(j, col(j).scaled(s));
    return r;
}

Mat Mat::transposed() const
{
    std::vector<std::vector<SVec::Entry>> rowsv(static_cast<std::size_t>(rows_));
    for (int j = 0; j < cols_; ++j)
        for (const auto& [i, x] : col(j))
            rowsv[static_cast<std::size_t>(i)].emplace_back(j, x);
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        t.set_col(i, SVec::from_sorted(std::move(rowsv[static_cast<std::size_t>(i)])));
    return t;
}

bool Mat::operator==(const Mat& o) const
{
    return rows_ == o.rows_ && cols_ == o.cols_ && col_ == o.col_;
}

void Reducer::reduce(SVec& v, SVec& combo) const
{
    while (!v.empty()) {
        auto it = pivots_.find(v.top());
        if (it == pivots_.end())
            return;
        Scalar f = -(v.top_value() / it->second.vec.top_value());
        v.axpy(f, it->second.vec);
        combo.axpy(f, it->second.combo);
    }
}

bool Reducer::insert(const SVec& v)
{
    SVec w = v;
    SVec combo = SVec::unit(count_++, one_);
    reduce(w, combo);
    if (w.empty()) {
        deps_.push_back(std::move(combo));
        return false;
    }
    int top = w.top();
    pivots_.emplace(top, Pivot{std::move(w), std::move(combo)});
    return true;
}

bool Reducer::contains(const SVec& v) const
{
    SVec w = v, c;
    reduce(w, c);
    return w.empty();
}

std::optional<SVec> Reducer::solve(const SVec& v) const
{
    SVec w = v, c;
    reduce(w, c);
    if (!w.empty())
        return std::nullopt;
    return -c;
}

std::vector<SVec> Reducer::basis() const
{
    std::vector<SVec> b;
    for (const auto& [k, p] : pivots_)
        b.push_back(p.vec);
    return b;
}

SVec Echelon::normal_form(const SVec& v) const
{
    // Clear pivot entries from the top down; a row only adds entries below its pivot.
    SVec w = v;
    auto bound = w.entries().size();
    while (bound > 0) {
        int i = w.entries()[bound - 1].first;
        auto it = rows_.find(i);
        if (it == rows_.end()) {
            --bound;
            continue;
        }
        int pivot = i;
        Scalar c = w.entries()[bound - 1].second;
        w.axpy(-c, it->second);
        // entries above the pivot are untouched: recompute the position below it
        bound = 0;
        for (const auto& e : w.entries()) {
            if (e.first >= pivot)
                break;
            ++bound;
        }
    }
    return w;
}

bool Echelon::insert(const SVec& v)
{
    SVec w = normal_form(v);
    if (w.empty())
        return false;
    int p = w.top();
    rows_.emplace(p, w.scaled(w.top_value().inv()));
    return true;
}

std::vector<SVec> Echelon::basis() const
{
    std::vector<SVec> b;
    for (const auto& [p, row] : rows_)
        b.push_back(row);
    return b;
}

int rank(const Mat& m, const Field& f)
{
    Reducer r(f);
    for (int j = 0; j < m.cols(); ++j)
        r.insert(m.col(j));
    return r.rank();
}

std::vector<SVec> kernel(const Mat& m, const Field& f)
{
    Reducer r(f);
    for (int j = 0; j < m.cols(); ++j)
        r.insert(m.col(j));
    return r.dependencies();
}

std::optional<SVec> solve(const Mat& m, const SVec& b, const Field& f)
{
    Reducer r(f);
    for (int j = 0; j < m.cols(); ++j)
        r.insert(m.col(j));
    return r.solve(b);
}

}  // namespace kd
