#pragma once

#include "kd/linalg.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace kd {

inline constexpr long kInf = 1'000'000'000L;

// The one place Koszul signs come from: (-1)^{ab}.
inline bool odd_product(long a, long b) { return ((a * b) & 1L) != 0; }
inline Scalar koszul_sign(const Field& f, long a, long b) { return f.sign(odd_product(a, b)); }
inline Scalar parity_sign(const Field& f, long a) { return f.sign((a & 1L) != 0); }

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degrees lo..hi are known exactly. `below`/`above` record that the object
// vanishes outside that range on the respective side; otherwise those
// degrees are unknown (truncated).
struct Window {
    int lo = 0;
    int hi = -1;
    bool below = true;
    bool above = true;

    static Window finite(int lo, int hi) { return {lo, hi, true, true}; }
    static Window bounded_below(int lo, int hi) { return {lo, hi, true, false}; }
    static Window bounded_above(int lo, int hi) { return {lo, hi, false, true}; }

    bool known(int n) const { return lo <= n && n <= hi; }
    bool determined(int n) const { return known(n) || (below && n < lo) || (above && n > hi); }
    long det_lo() const { return below ? -kInf : lo; }
    long det_hi() const { return above ? kInf : hi; }
    std::string polarity() const;
    Window shifted(int s) const { return {lo + s, hi + s, below, above}; }
    Window dual() const { return {-hi, -lo, above, below}; }
    Window capped(std::optional<int> lo_cap, std::optional<int> hi_cap) const;
    bool operator==(const Window&) const = default;
};

// Window of an object determined exactly on [L, H] (possibly infinite ends)
// whose nonzero degrees lie in `support`.
Window window_from_determined(long L, long H, std::optional<std::pair<int, int>> support);

class Space;
using SpaceP = std::shared_ptr<const Space>;

struct TensorBlock {
    int left_deg;
    int offset;
    int left_dim;
    int right_dim;
};

using Basis = std::map<int, std::vector<std::string>>;

class Space {
public:
    Space(Field f, Window w, Basis basis);

    const Field& field() const { return field_; }
    const Window& window() const { return window_; }
    int dim(int n) const;
    const std::vector<std::string>& labels(int n) const;
    std::optional<int> index_of(int n, const std::string& label) const;
    std::vector<int> degrees() const;
    std::optional<std::pair<int, int>> support() const;
    int total_dim() const;
    bool known(int n) const { return window_.known(n); }
    bool determined(int n) const { return window_.determined(n); }
    // degrees that may be nonzero, with kInf for unknown rays; nullopt if zero
    std::optional<long> min_possible() const;
    std::optional<long> max_possible() const;

    bool is_tensor() const { return left_ != nullptr; }
    const SpaceP& left() const { return left_; }
    const SpaceP& right() const { return right_; }
    const std::vector<TensorBlock>& blocks(int n) const;
    int tensor_index(int n, int left_deg, int a, int b) const;
    // (left degree, left index, right index)
    std::tuple<int, int, int> tensor_split(int n, int idx) const;

private:
    friend SpaceP tensor_space(const SpaceP&, const SpaceP&, std::optional<int>, std::optional<int>);
    Field field_;
    Window window_;
    Basis basis_;
    SpaceP left_, right_;
    std::map<int, std::vector<TensorBlock>> layout_;
};

SpaceP make_space(const Field& f, Window w, Basis basis);
SpaceP ground_space(const Field& f);
SpaceP zero_space(const Field& f);
SpaceP tensor_space(const SpaceP& u, const SpaceP& v, std::optional<int> lo_cap = std::nullopt,
                    std::optional<int> hi_cap = std::nullopt);
SpaceP dual_space(const SpaceP& u);
SpaceP shift_space(const SpaceP& u, int s);
SpaceP sum_space(const SpaceP& u, const SpaceP& v);
SpaceP restrict_space(const SpaceP& u, Window w);
// same dims on all degrees known to both
bool same_shape(const Space& a, const Space& b);
std::string dual_label(const std::string& label);

// Homogeneous linear map of fixed degree; blocks[n]: src_n -> tgt_{n+deg}.
// A degree is defined exactly when it has a block.
class GMap {
public:
    GMap() = default;
    // zero map defined on every degree where it is determined
    GMap(SpaceP src, SpaceP tgt, int deg);

    const SpaceP& src() const { return src_; }
    const SpaceP& tgt() const { return tgt_; }
    int deg() const { return deg_; }
    const Field& field() const { return src_->field(); }
    const std::map<int, Mat>& blocks() const { return blocks_; }
    bool defined(int n) const { return blocks_.count(n) > 0; }
    Mat block(int n) const;
    void set(int n, Mat m);
    void undefine(int n) { blocks_.erase(n); }
    SVec apply(int n, const SVec& v) const;
    std::vector<int> domain() const;

private:
    SpaceP src_, tgt_;
    int deg_ = 0;
    std::map<int, Mat> blocks_;
};

GMap identity_map(const SpaceP& s);
GMap compose(const GMap& f, const GMap& g);  // f after g
GMap operator+(const GMap& f, const GMap& g);
GMap operator-(const GMap& f, const GMap& g);
GMap scaled(const GMap& f, const Scalar& s);
GMap restrict_map(const GMap& f, const SpaceP& src, const SpaceP& tgt);
// (f (x) g)(u (x) v) = (-1)^{|g||u|} f(u) (x) g(v)
GMap tensor_map(const GMap& f, const GMap& g, const SpaceP& src = nullptr, const SpaceP& tgt = nullptr);
// f*(b) = (-1)^{|f||b|} b f
GMap dual_map(const GMap& f);
// first degree (on the common domain) where f and g differ
std::optional<int> first_difference(const GMap& f, const GMap& g);
bool is_zero_map(const GMap& f);

// (U (x) V) (x) W -> U (x) (V (x) W), and inverse; unitors with the ground space
GMap assoc(const SpaceP& uv_w);
GMap assoc_inv(const SpaceP& u_vw);
// U (x) V -> V (x) U, u|v -> (-1)^{|u||v|} v|u
GMap braid(const SpaceP& uv);
GMap unit_left(const SpaceP& k_u);     // k (x) U -> U
GMap unit_left_inv(const SpaceP& u);   // U -> k (x) U
GMap unit_right(const SpaceP& u_k);    // U (x) k -> U
GMap unit_right_inv(const SpaceP& u);  // U -> U (x) k

struct Complex {
    SpaceP space;
    GMap d;
    const Field& field() const { return space->field(); }
};

Complex make_complex(SpaceP s, std::map<int, Mat> diff);
Complex complex_with(SpaceP s, GMap d);
Complex zero_complex(SpaceP s);
void check_d2(const Complex& x);
// throws unless f d = (-1)^{|f|} d f on the common domain
void check_chain_map(const GMap& f, const Complex& x, const Complex& y);
std::optional<int> chain_map_defect(const GMap& f, const Complex& x, const Complex& y);

Complex shift(const Complex& x, int s);
Complex tensor(const Complex& u, const Complex& v, std::optional<int> lo_cap = std::nullopt,
               std::optional<int> hi_cap = std::nullopt);
// differential of U (x) V on a given tensor space of U, V
GMap tensor_differential(const Complex& u, const Complex& v, const SpaceP& uv);
Complex dual(const Complex& x);
Complex direct_sum(const Complex& x, const Complex& y);
// Hom(U,V)_p with basis hom(u,v) ordered by source degree, then u, then v
Complex hom_complex(const Complex& u, const Complex& v);
// offset of the block of maps out of U_i inside Hom(U,V)_p
std::map<int, int> hom_offsets(const Space& u, const Space& v, int p);
SVec hom_element(const SpaceP& u, const SpaceP& v, const GMap& f, int p);
GMap hom_map(const SpaceP& u, const SpaceP& v, int p, const SVec& x);

// U* (x) V* -> (U (x) V)*
GMap varpi(const SpaceP& u, const SpaceP& v);
// Hom(U,V) -> Hom(V*,U*)
GMap delta_embed(const Complex& u, const Complex& v);

class Homology {
public:
    explicit Homology(const Complex& x);

    const Complex& complex() const { return x_; }
    std::vector<int> degrees() const;
    int rank(int n) const;
    bool certified(int n) const;
    const std::vector<SVec>& reps(int n) const;
    std::map<int, int> ranks() const;
    bool is_cycle(int n, const SVec& z) const;
    // coordinates of the class of z in terms of reps(n); nullopt if z is not a cycle
    std::optional<SVec> classify(int n, const SVec& z) const;
    // some y with d y = z, if z is a boundary
    std::optional<SVec> bound(int n, const SVec& z) const;

private:
    struct Level {
        int rank = 0;
        bool certified = false;
        std::vector<SVec> reps;
        std::shared_ptr<Reducer> span;  // inputs: d(e_j) for X_{n+1}, then reps
        int boundary_inputs = 0;
    };
    Complex x_;
    std::map<int, Level> levels_;
};

Complex cone(const GMap& f, const Complex& x, const Complex& y);

struct QuasiIsoVerdict {
    std::map<int, bool> iso;
    std::map<int, bool> certified;
    bool all_certified_iso() const;
    std::optional<int> first_failure() const;
};

QuasiIsoVerdict quasi_iso_check(const GMap& f, const Complex& x, const Complex& y);

}  // namespace kd
