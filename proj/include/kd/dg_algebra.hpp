#pragma once

#include "kd/chains.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace kd {

// Polarity p: reduced part lives in positive degrees; n: in degrees <= -2
// (algebras) or <= -1 (coalgebras). none: no declared bound.
enum class Polarity { none, p, n };
std::string polarity_name(Polarity pol);
Polarity parse_polarity(std::string_view text);

using Word = std::vector<int>;

// Word structure of algebras and coalgebras built from letters.
struct WordBasis {
    std::vector<std::string> letters;
    std::vector<int> letter_deg;
    std::map<int, std::vector<Word>> words;  // per degree, aligned with the space basis
    std::vector<SVec> letter_vec;            // each letter as an element of its degree
    std::map<int, std::map<Word, int>> pos;

    void build_index();
    int degree(const Word& w) const;
    std::string label(const Word& w, const std::string& sep, const std::string& empty) const;
    std::optional<int> index_of(int n, const Word& w) const;
};
using WordBasisP = std::shared_ptr<const WordBasis>;

// Basis is adapted: the unit is basis vector `unit` of degree 0 and, when
// augmented, the augmentation reads off its coordinate, so the other basis
// vectors span the augmentation ideal.
struct DGAlgebra {
    Complex cx;
    GMap mul;  // A|A -> A
    int unit = 0;
    bool augmented = true;
    Polarity polarity = Polarity::none;
    WordBasisP words;  // set for algebras built from words

    const SpaceP& space() const { return cx.space; }
    const Field& field() const { return cx.field(); }
    SVec unit_vec() const { return SVec::unit(unit, field().one()); }
    bool is_unit(int n, int i) const { return n == 0 && i == unit; }
    // a in A_i, b in A_j
    SVec product(int i, const SVec& a, int j, const SVec& b) const;
    SVec product(int i, int a, int j, int b) const;
    // coordinate of the unit
    Scalar augment(int n, const SVec& a) const;
};
using AlgebraP = std::shared_ptr<const DGAlgebra>;

// Validates every structural law on the window and returns the algebra.
AlgebraP make_algebra(DGAlgebra a);
// throws StructuralError naming the failed law and a witness triple
void check_dga(const DGAlgebra& a);

enum class Side { left, right };
std::string side_name(Side s);

// left: act is A|M -> M; right: M|A -> M
struct DGModule {
    AlgebraP alg;
    Side side = Side::left;
    Complex cx;
    GMap act;

    const SpaceP& space() const { return cx.space; }
    const Field& field() const { return cx.field(); }
    // a in A_i acting on m in M_j
    SVec act_on(int i, const SVec& a, int j, const SVec& m) const;
};
using ModuleP = std::shared_ptr<const DGModule>;

ModuleP make_module(DGModule m);
void check_module(const DGModule& m);
// A acting on itself
ModuleP regular_module(const AlgebraP& a, Side side);
// k through the augmentation
ModuleP trivial_module(const AlgebraP& a, Side side);
// A (x) V (left) or V (x) A (right), V a complex
ModuleP free_module(const AlgebraP& a, const Complex& v, Side side);
// module structure given by a table of actions a*e_j; zero differential unless given
ModuleP module_from_action(const AlgebraP& a, Side side, const Complex& cx, GMap act);

// Presentation text format, one directive per line, `#` starts a comment:
//   gen <label> <degree>
//   rel <sum of integer multiples of words, e.g. x1*x2 + x2*x1 or 2 x*y - y>
//   diff <gen> = <sum>
//   polarity p|n
//   cutoff <N>
struct Term {
    long coef = 1;
    Word word;
};
using Poly = std::vector<Term>;

struct Presentation {
    std::vector<std::pair<std::string, int>> gens;
    std::vector<Poly> rels;
    std::vector<std::pair<int, Poly>> diffs;
    Polarity polarity = Polarity::none;
    std::optional<int> cutoff;

    int poly_degree(const Poly& p) const;
};

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(int l, int c, const std::string& what);
};

Presentation parse_presentation(std::string_view text);
Presentation load_presentation(const std::string& path);
// ParseError naming the first generator whose degree contradicts the declared polarity
void check_generator_polarity(const Presentation& p);
std::string format_poly(const Presentation& p, const Poly& poly);

// A = T(V)/(relations) degreewise up to the cutoff, with optional differential.
AlgebraP from_presentation(const Presentation& p, const Field& f, std::optional<int> cutoff = std::nullopt);
// augmented tensor algebra on a graded space (labels become letters)
AlgebraP tensor_algebra(const SpaceP& v, int cutoff);
AlgebraP opposite(const AlgebraP& a);
// A|B with (a|b)(a'|b') = (-1)^{|b||a'|} aa'|bb'
AlgebraP tensor_product(const AlgebraP& a, const AlgebraP& b);
// unique derivation of the given degree extending x -> images[x] on generators;
// the algebra must carry word data whose letters generate it
GMap derivation_extend(const DGAlgebra& a, const std::vector<SVec>& images, int degree);
// the derivation as it acts on a single letter image table, evaluated on a word
SVec derivation_on_word(const DGAlgebra& a, const Word& w, const std::vector<SVec>& images, int degree);
// algebra morphism out of a tensor algebra sending letter x to images[x]
GMap extend_multiplicatively(const DGAlgebra& tv, const DGAlgebra& target, const std::vector<SVec>& images);

// A twister in a host DG algebra: a degree -1 element with d(t) = t^2.
struct Twister {
    AlgebraP host;
    SVec element;  // in host degree -1
};
// throws with the degree when the twister identity fails
void check_twister(const Twister& t);
// ^tU: differential d - lambda(t) for left modules, d + lambda(t) for right ones
Complex twist_module(const DGModule& u, const Twister& t);

// throws unless g is a morphism of DG algebras
void check_algebra_morphism(const GMap& g, const DGAlgebra& a, const DGAlgebra& b);

// degree-preserving unit embedding k -> A and its augmentation A -> k
GMap unit_map(const DGAlgebra& a);
GMap augmentation_map(const DGAlgebra& a);

}  // namespace kd
