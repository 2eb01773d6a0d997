#pragma once

#include "kd/scalars.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace kd {

// Sparse vector: entries sorted by index, no stored zeros.
class SVec {
public:
    using Entry = std::pair<int, Scalar>;

    SVec() = default;
    static SVec unit(int i, const Scalar& one) { SVec v; v.e_.emplace_back(i, one); return v; }
    // entries must be sorted and distinct; zeros are dropped
    static SVec from_sorted(std::vector<Entry> entries);

    bool empty() const { return e_.empty(); }
    std::size_t size() const { return e_.size(); }
    const std::vector<Entry>& entries() const { return e_; }
    auto begin() const { return e_.begin(); }
    auto end() const { return e_.end(); }

    Scalar get(int i) const;
    int top() const { return e_.back().first; }
    const Scalar& top_value() const { return e_.back().second; }

    void axpy(const Scalar& a, const SVec& x);  // *this += a*x
    SVec scaled(const Scalar& a) const;
    SVec operator+(const SVec& o) const { SVec r = *this; r.axpy(one_like(o), o); return r; }
    SVec operator-(const SVec& o) const { SVec r = *this; r.axpy(-one_like(o), o); return r; }
    SVec operator-() const;
    bool operator==(const SVec& o) const { return e_ == o.e_; }
    bool operator!=(const SVec& o) const { return !(*this == o); }

    // shift indices by off
    SVec offset(int off) const;

private:
    static Scalar one_like(const SVec& v);
    std::vector<Entry> e_;
};

// Accumulates entries in any order.
class VecBuilder {
public:
    void add(int i, const Scalar& s);
    void add(const SVec& v, const Scalar& s, int offset = 0);
    SVec build() const;
    bool empty() const { return m_.empty(); }

private:
    std::map<int, Scalar> m_;
};

// Column-major sparse matrix; column j is the image of the j-th source basis vector.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), col_(static_cast<std::size_t>(cols)) {}
    static Mat identity(int n, const Field& f);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const SVec& col(int j) const { return col_[static_cast<std::size_t>(j)]; }
    void set_col(int j, SVec v) { col_[static_cast<std::size_t>(j)] = std::move(v); }
    Scalar at(int r, int c) const { return col(c).get(r); }
    void add(int r, int c, const Scalar& s);

    bool is_zero() const;
    std::size_t nnz() const;
    Mat operator*(const Mat& o) const;
    SVec operator*(const SVec& v) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat scaled(const Scalar& s) const;
    Mat transposed() const;
    bool operator==(const Mat& o) const;
    bool operator!=(const Mat& o) const { return !(*this == o); }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<SVec> col_;
};

// Incremental column reduction with pivots on the largest index.
// Keeps, for every stored pivot vector, its expression in terms of the inserted vectors.
class Reducer {
public:
    explicit Reducer(const Field& f) : one_(f.one()) {}

    // Inserts v as input number inserted(); returns true when it raised the rank.
    bool insert(const SVec& v);
    int rank() const { return static_cast<int>(pivots_.size()); }
    int inserted() const { return count_; }
    bool contains(const SVec& v) const;
    // coefficients c over inserted inputs with sum c_j input_j = v
    std::optional<SVec> solve(const SVec& v) const;
    // one dependency among the inserted inputs per non-pivot input (kernel of the input matrix)
    const std::vector<SVec>& dependencies() const { return deps_; }
    // reduced pivot vectors spanning the same space
    std::vector<SVec> basis() const;

private:
    struct Pivot {
        SVec vec;
        SVec combo;
    };
    // reduces v (and its combo) until its top has no pivot
    void reduce(SVec& v, SVec& combo) const;
    Scalar one_;
    std::map<int, Pivot> pivots_;
    std::vector<SVec> deps_;
    int count_ = 0;
};

// Span in echelon form: each stored vector has its own pivot (largest index).
// The pivot set is an invariant of the span, so the normal form is canonical.
class Echelon {
public:
    explicit Echelon(const Field& f) : one_(f.one()) {}
    // returns true when v enlarged the span
    bool insert(const SVec& v);
    int rank() const { return static_cast<int>(rows_.size()); }
    bool is_pivot(int i) const { return rows_.count(i) > 0; }
    // v minus the unique element of the span that cancels all pivot entries
    SVec normal_form(const SVec& v) const;
    std::vector<SVec> basis() const;

private:
    Scalar one_;
    std::map<int, SVec> rows_;  // pivot -> row with top_value 1
};

int rank(const Mat& m, const Field& f);
std::vector<SVec> kernel(const Mat& m, const Field& f);
std::optional<SVec> solve(const Mat& m, const SVec& b, const Field& f);

}  // namespace kd
