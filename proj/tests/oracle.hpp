#pragma once
// Dense reference computations, independent of the sparse engine.

#include "kd/chains.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<std::int64_t>>;  // row-major, residues mod p

inline std::int64_t md(std::int64_t a, std::int64_t p) { return ((a % p) + p) % p; }

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p)
{
    std::int64_t r = 1, e = p - 2;
    a = md(a, p);
    while (e) {
        if (e & 1)
            r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

inline int rank(Dense m, std::int64_t p)
{
    int rows = static_cast<int>(m.size());
    if (!rows)
        return 0;
    int cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (md(m[i][c], p)) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(m[r], m[piv]);
        std::int64_t iv = inv_mod(m[r][c], p);
        for (int i = 0; i < rows; ++i) {
            if (i == r || !md(m[i][c], p))
                continue;
            std::int64_t f = md(m[i][c], p) * iv % p;
            for (int k = 0; k < cols; ++k)
                m[i][k] = md(m[i][k] - f * m[r][k], p);
        }
        ++r;
    }
    return r;
}

inline Dense dense(const kd::Mat& a)
{
    Dense d(static_cast<std::size_t>(a.rows()), std::vector<std::int64_t>(static_cast<std::size_t>(a.cols()), 0));
    for (int c = 0; c < a.cols(); ++c)
        for (const auto& [r, x] : a.col(c))
            d[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = x.residue();
    return d;
}

inline Dense mul(const Dense& a, const Dense& b, std::int64_t p)
{
    std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    Dense r(n, std::vector<std::int64_t>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (a[i][j])
                for (std::size_t l = 0; l < m; ++l)
                    r[i][l] = (r[i][l] + a[i][j] * b[j][l]) % p;
    return r;
}

inline bool is_zero(const Dense& a)
{
    for (const auto& r : a)
        for (auto x : r)
            if (x)
                return false;
    return true;
}

// homology ranks of a complex given by dense differentials d[n]: C_n -> C_{n-1}
inline std::map<int, int> homology_ranks(const kd::Complex& x)
{
    std::int64_t p = x.field().characteristic();
    std::map<int, int> out;
    const auto& w = x.space->window();
    for (int n = w.lo; n <= w.hi; ++n) {
        int dn = x.space->dim(n);
        int rk_out = x.d.defined(n) ? rank(dense(x.d.block(n)), p) : 0;
        int rk_in = x.space->known(n + 1) && x.d.defined(n + 1) ? rank(dense(x.d.block(n + 1)), p) : 0;
        out[n] = dn - rk_out - rk_in;
    }
    return out;
}

// random complex with prescribed dims and random differential satisfying d^2 = 0:
// d_n = P_{n-1} E_n Q_n where ranks are kept consistent by building from a chain
// of random splittings.
inline kd::Complex random_complex(const kd::Field& f, int lo, const std::vector<int>& dims, std::mt19937& rng,
                                  double density = 0.5)
{
    int hi = lo + static_cast<int>(dims.size()) - 1;
    kd::Basis b;
    for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
        std::vector<std::string> l;
        for (int k = 0; k < dims[static_cast<std::size_t>(i)]; ++k)
            l.push_back("e" + std::to_string(lo + i) + "_" + std::to_string(k));
        b.emplace(lo + i, l);
    }
    auto s = kd::make_space(f, kd::Window::finite(lo, hi), b);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_real_distribution<double> u01(0, 1);
    // build d_n = A_n restricted so that d_{n-1} d_n = 0: pick d_n with columns in ker d_{n-1}
    std::map<int, kd::Mat> d;
    for (int n = lo + 1; n <= hi; ++n) {
        int rows = s->dim(n - 1), cols = s->dim(n);
        std::vector<kd::SVec> ker;
        if (d.count(n - 1))
            ker = kd::kernel(d.at(n - 1), f);
        else
            for (int i = 0; i < rows; ++i)
                ker.push_back(kd::SVec::unit(i, f.one()));
        kd::Mat m(rows, cols);
        for (int c = 0; c < cols; ++c) {
            kd::VecBuilder col;
            for (const auto& z : ker)
                if (u01(rng) < density)
                    col.add(z, f.from_int(coef(rng)));
            m.set_col(c, col.build());
        }
        d.emplace(n, std::move(m));
    }
    return kd::make_complex(s, d);
}

}  // namespace oracle

namespace oracle {

inline kd::SpaceP random_space(const kd::Field& f, int lo, const std::vector<int>& dims, const std::string& tag)
{
    kd::Basis b;
    for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
        std::vector<std::string> l;
        for (int k = 0; k < dims[static_cast<std::size_t>(i)]; ++k)
            l.push_back(tag + std::to_string(lo + i) + "_" + std::to_string(k));
        b.emplace(lo + i, l);
    }
    return kd::make_space(f, kd::Window::finite(lo, lo + static_cast<int>(dims.size()) - 1), b);
}

inline kd::GMap random_map(const kd::SpaceP& src, const kd::SpaceP& tgt, int deg, std::mt19937& rng,
                           double density = 0.5)
{
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_real_distribution<double> u01(0, 1);
    kd::GMap f(src, tgt, deg);
    for (int n : f.domain()) {
        kd::Mat m(tgt->dim(n + deg), src->dim(n));
        for (int c = 0; c < m.cols(); ++c)
            for (int r = 0; r < m.rows(); ++r)
                if (u01(rng) < density)
                    m.add(r, c, src->field().from_int(coef(rng)));
        f.set(n, m);
    }
    return f;
}

inline std::vector<int> random_dims(std::mt19937& rng, int len, int maxdim)
{
    std::uniform_int_distribution<int> d(0, maxdim);
    std::vector<int> out;
    for (int i = 0; i < len; ++i)
        out.push_back(d(rng));
    return out;
}

}  // namespace oracle

#include "kd/dg_algebra.hpp"

namespace oracle {

// dim of T(V)_n / I_n with I_n spanned by every u*r*w, by dense elimination
inline int presentation_rank(const kd::Presentation& p, int n, std::int64_t prime)
{
    std::map<int, std::vector<kd::Word>> words;
    words[0].push_back({});
    int sgn = p.gens.front().second > 0 ? 1 : -1;
    for (int m = 1; m <= std::abs(n); ++m) {
        int d = sgn * m;
        for (std::size_t x = 0; x < p.gens.size(); ++x) {
            auto it = words.find(d - p.gens[x].second);
            if (it == words.end())
                continue;
            for (auto w : it->second) {
                w.push_back(static_cast<int>(x));
                words[d].push_back(w);
            }
        }
    }
    auto& tn = words[n];
    std::map<kd::Word, int> pos;
    for (std::size_t i = 0; i < tn.size(); ++i)
        pos[tn[i]] = static_cast<int>(i);
    Dense rows;
    for (const auto& r : p.rels) {
        int dr = p.poly_degree(r);
        for (const auto& [du, us] : words)
            for (const auto& u : us) {
                auto wt = words.find(n - dr - du);
                if (wt == words.end())
                    continue;
                for (const auto& w : wt->second) {
                    std::vector<std::int64_t> row(tn.size(), 0);
                    for (const auto& t : r) {
                        kd::Word x = u;
                        x.insert(x.end(), t.word.begin(), t.word.end());
                        x.insert(x.end(), w.begin(), w.end());
                        auto& e = row[static_cast<std::size_t>(pos.at(x))];
                        e = md(e + t.coef, prime);
                    }
                    rows.push_back(row);
                }
            }
    }
    // rank of the row set
    int rk = 0;
    if (!rows.empty()) {
        Dense t(tn.size(), std::vector<std::int64_t>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < tn.size(); ++j)
                t[j][i] = rows[i][j];
        rk = rank(t, prime);
    }
    return static_cast<int>(tn.size()) - rk;
}

inline std::string fixture(const std::string& name) { return std::string(KD_FIXTURES) + "/" + name; }

}  // namespace oracle
