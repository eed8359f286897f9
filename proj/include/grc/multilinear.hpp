#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "grc/matrix.hpp"

namespace grc {

inline long long binom(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline long long ipow(long long b, long long e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

/// Coordinate split used by the cohomology-style operators below:
/// V = F^{dim_v}, W = F^{dim_w}, U = V (+) W with the V block first.
struct SpaceSpec {
    std::size_t dim_v = 0;
    std::size_t dim_w = 0;
    std::size_t dim_u() const { return dim_v + dim_w; }
};

using BasisIndex = std::vector<int>;

/// All p-tuples over [0, n), last coordinate fastest. dim = n^p.
inline std::vector<BasisIndex> tensor_basis(int n, int p) {
    std::vector<BasisIndex> out;
    if (p == 0) {
        out.push_back({});
        return out;
    }
    if (n == 0) return out;
    BasisIndex cur(p, 0);
    while (true) {
        out.push_back(cur);
        int i = p - 1;
        while (i >= 0 && cur[i] == n - 1) cur[i--] = 0;
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

/// Nondecreasing p-multisets over [0, n) in lexicographic order.
/// dim = C(n+p-1, p); p = 0 yields the single empty index.
inline std::vector<BasisIndex> sym_basis(int n, int p) {
    std::vector<BasisIndex> out;
    BasisIndex cur;
    auto rec = [&](auto&& self, int start) -> void {
        if ((int)cur.size() == p) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// Strictly increasing q-subsets of [0, n) in lexicographic order.
/// dim = C(n, q); q > n yields an empty list.
inline std::vector<BasisIndex> ext_basis(int n, int q) {
    std::vector<BasisIndex> out;
    BasisIndex cur;
    auto rec = [&](auto&& self, int start) -> void {
        if ((int)cur.size() == q) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// Position of a basis index in the lists above (they are lex-sorted).
inline std::size_t basis_rank(const std::vector<BasisIndex>& basis, const BasisIndex& idx) {
    auto it = std::lower_bound(basis.begin(), basis.end(), idx);
    if (it == basis.end() || *it != idx) throw std::logic_error("basis_rank: index not in basis");
    return static_cast<std::size_t>(it - basis.begin());
}

inline std::size_t tuple_rank(int n, const BasisIndex& t) {
    std::size_t r = 0;
    for (int c : t) r = r * n + static_cast<std::size_t>(c);
    return r;
}

/// Projection T^p F^n -> S^p F^n sending each pure tensor index to its
/// sorted copy with coefficient one.
inline Matrix symmetrize(const PrimeField& f, int n, int p) {
    auto dom = tensor_basis(n, p);
    auto cod = sym_basis(n, p);
    Matrix m(f, cod.size(), dom.size());
    for (std::size_t j = 0; j < dom.size(); ++j) {
        BasisIndex sorted = dom[j];
        std::sort(sorted.begin(), sorted.end());
        m.at(basis_rank(cod, sorted), j) = 1;
    }
    return m;
}

namespace detail {

/// Expansion of the wedge-lowering recursion on a basis subset: returns
/// (sign, extracted index, remaining subset) triples. For |w| = 1 the
/// element maps to itself; otherwise peeling the largest index i_last
/// gives expand(rest) with i_last re-appended plus the term
/// (-1)^{|rest|} (i_last, rest).
struct CowedgeTerm {
    int sign;
    int extracted;
    BasisIndex rest;
};

inline std::vector<CowedgeTerm> cowedge_expand(const BasisIndex& w) {
    std::vector<CowedgeTerm> out;
    if (w.empty()) return out;
    if (w.size() == 1) {
        out.push_back({1, w[0], {}});
        return out;
    }
    BasisIndex rest(w.begin(), w.end() - 1);
    int last = w.back();
    for (auto& t : cowedge_expand(rest)) {
        BasisIndex r = t.rest;
        r.push_back(last);  // last exceeds every element of r, so it stays sorted
        out.push_back({t.sign, t.extracted, std::move(r)});
    }
    out.push_back({rest.size() % 2 == 0 ? 1 : -1, last, rest});
    return out;
}

/// Sign and sorted result of wedging a sorted subset with a single index;
/// returns false if the index is already present.
inline bool wedge_append(const BasisIndex& w, int c, BasisIndex& result, int& sign) {
    if (std::find(w.begin(), w.end(), c) != w.end()) return false;
    int greater = 0;
    for (int x : w)
        if (x > c) ++greater;
    sign = (greater % 2 == 0) ? 1 : -1;
    result = w;
    result.insert(std::lower_bound(result.begin(), result.end(), c), c);
    return true;
}

}  // namespace detail

/// Wedge-degree-lowering operator T^pV (x) Λ^{q+1}W -> T^pV (x) W (x) Λ^qW.
/// Acts term-wise on the tensor factor.
inline Matrix cowedge(const PrimeField& f, const SpaceSpec& s, int p, int q) {
    int dv = (int)s.dim_v, dw = (int)s.dim_w;
    auto tb = tensor_basis(dv, p);
    auto dom_w = ext_basis(dw, q + 1);
    auto cod_w = ext_basis(dw, q);
    std::size_t cod_dim = tb.size() * dw * cod_w.size();
    std::size_t dom_dim = tb.size() * dom_w.size();
    Matrix m(f, cod_dim, dom_dim);
    for (std::size_t wi = 0; wi < dom_w.size(); ++wi) {
        for (auto& term : detail::cowedge_expand(dom_w[wi])) {
            u64 coeff = term.sign > 0 ? 1 : f.neg(1);
            std::size_t rest_rank = basis_rank(cod_w, term.rest);
            for (std::size_t ti = 0; ti < tb.size(); ++ti) {
                std::size_t row = (ti * dw + term.extracted) * cod_w.size() + rest_rank;
                std::size_t colidx = ti * dom_w.size() + wi;
                m.at(row, colidx) = f.add(m.at(row, colidx), coeff);
            }
        }
    }
    return m;
}

/// Differential along V: T^pV (x) U (x) Λ^qW -> T^{p+1}V (x) U (x) Λ^qW.
/// Inserts v into each of the p+1 slots left of the U factor with
/// alternating sign, so that the square of the map vanishes.
inline Matrix coboundary_v(const PrimeField& f, const SpaceSpec& s, const std::vector<u64>& v, int p, int q) {
    int dv = (int)s.dim_v, dw = (int)s.dim_w, du = (int)s.dim_u();
    if ((int)v.size() != dv) throw std::invalid_argument("coboundary_v: vector not in V");
    auto tb = tensor_basis(dv, p);
    auto wb = ext_basis(dw, q);
    std::size_t cod_t = ipow(dv, p + 1);
    Matrix m(f, cod_t * du * wb.size(), tb.size() * du * wb.size());
    for (std::size_t ti = 0; ti < tb.size(); ++ti) {
        for (int j = 0; j <= p; ++j) {
            u64 sgn = f.sign(j);
            for (int c = 0; c < dv; ++c) {
                if (v[c] == 0) continue;
                BasisIndex t2 = tb[ti];
                t2.insert(t2.begin() + j, c);
                std::size_t t2r = tuple_rank(dv, t2);
                u64 coeff = f.mul(sgn, v[c]);
                for (int u = 0; u < du; ++u) {
                    for (std::size_t wi = 0; wi < wb.size(); ++wi) {
                        std::size_t row = (t2r * du + u) * wb.size() + wi;
                        std::size_t colidx = (ti * du + u) * wb.size() + wi;
                        m.at(row, colidx) = f.add(m.at(row, colidx), coeff);
                    }
                }
            }
        }
    }
    return m;
}

/// The same differential on a plain wedge space (no U factor): the zero
/// map Λ^qW -> U (x) Λ^qW.
inline Matrix coboundary_v_on_wedge(const PrimeField& f, const SpaceSpec& s, int q) {
    auto wb = ext_basis((int)s.dim_w, q);
    return Matrix(f, s.dim_u() * wb.size(), wb.size());
}

/// Differential along W: T^pV (x) U (x) Λ^qW -> T^pV (x) U (x) Λ^{q+1}W.
/// Wedges w onto the trailing factor with global sign (-1)^{p+q}.
inline Matrix coboundary_w(const PrimeField& f, const SpaceSpec& s, const std::vector<u64>& w, int p, int q) {
    int dv = (int)s.dim_v, dw = (int)s.dim_w, du = (int)s.dim_u();
    if ((int)w.size() != dw) throw std::invalid_argument("coboundary_w: vector not in W");
    auto tb = tensor_basis(dv, p);
    auto dom_w = ext_basis(dw, q);
    auto cod_w = ext_basis(dw, q + 1);
    Matrix m(f, tb.size() * du * cod_w.size(), tb.size() * du * dom_w.size());
    u64 level_sign = f.sign(p + q);
    for (std::size_t wi = 0; wi < dom_w.size(); ++wi) {
        for (int c = 0; c < dw; ++c) {
            if (w[c] == 0) continue;
            BasisIndex merged;
            int sgn;
            if (!detail::wedge_append(dom_w[wi], c, merged, sgn)) continue;
            u64 coeff = f.mul(level_sign, f.mul(sgn > 0 ? 1 : f.neg(1), w[c]));
            std::size_t mr = basis_rank(cod_w, merged);
            for (std::size_t ti = 0; ti < tb.size(); ++ti) {
                for (int u = 0; u < du; ++u) {
                    std::size_t row = (ti * du + u) * cod_w.size() + mr;
                    std::size_t colidx = (ti * du + u) * dom_w.size() + wi;
                    m.at(row, colidx) = f.add(m.at(row, colidx), coeff);
                }
            }
        }
    }
    return m;
}

/// Inclusion T^pV (x) Λ^qW -> T^{p-1}V (x) U (x) Λ^qW moving the trailing
/// tensor slot into the U factor (V block). Requires p >= 1.
inline Matrix embed_trailing_v(const PrimeField& f, const SpaceSpec& s, int p, int q) {
    if (p < 1) throw std::invalid_argument("embed_trailing_v: needs p >= 1");
    int dv = (int)s.dim_v, dw = (int)s.dim_w, du = (int)s.dim_u();
    auto tb = tensor_basis(dv, p);
    auto wb = ext_basis(dw, q);
    std::size_t cod_t = ipow(dv, p - 1);
    Matrix m(f, cod_t * du * wb.size(), tb.size() * wb.size());
    for (std::size_t ti = 0; ti < tb.size(); ++ti) {
        BasisIndex head(tb[ti].begin(), tb[ti].end() - 1);
        int last = tb[ti].back();
        std::size_t hr = tuple_rank(dv, head);
        for (std::size_t wi = 0; wi < wb.size(); ++wi) {
            m.at((hr * du + last) * wb.size() + wi, ti * wb.size() + wi) = 1;
        }
    }
    return m;
}

/// Inclusion T^pV (x) W (x) Λ^qW -> T^pV (x) U (x) Λ^qW placing the middle
/// factor in the W block of U.
inline Matrix embed_middle_w(const PrimeField& f, const SpaceSpec& s, int p, int q) {
    int dv = (int)s.dim_v, dw = (int)s.dim_w, du = (int)s.dim_u();
    auto tb = tensor_basis(dv, p);
    auto wb = ext_basis(dw, q);
    Matrix m(f, tb.size() * du * wb.size(), tb.size() * dw * wb.size());
    for (std::size_t ti = 0; ti < tb.size(); ++ti) {
        for (int c = 0; c < dw; ++c) {
            for (std::size_t wi = 0; wi < wb.size(); ++wi) {
                m.at((ti * du + (dv + c)) * wb.size() + wi, (ti * dw + c) * wb.size() + wi) = 1;
            }
        }
    }
    return m;
}

/// Direct sum (+)_{p+q=level} T^pV (x) U (x) Λ^qW with blocks stored in
/// order of increasing p. This is the coordinate system shared by the
/// degree-raising maps and the evaluation codes built on them.
struct DegreeLevel {
    SpaceSpec spec;
    int level;
    std::vector<int> comp_p;               // ascending
    std::vector<std::size_t> comp_dim;
    std::vector<std::size_t> comp_offset;

    DegreeLevel(const SpaceSpec& s, int lvl) : spec(s), level(lvl) {
        std::size_t off = 0;
        for (int p = 0; p <= lvl; ++p) {
            int q = lvl - p;
            std::size_t dim = ipow((long long)s.dim_v, p) * s.dim_u() * binom((long long)s.dim_w, q);
            comp_p.push_back(p);
            comp_dim.push_back(dim);
            comp_offset.push_back(off);
            off += dim;
        }
    }

    std::size_t dim() const { return comp_offset.back() + comp_dim.back(); }

    std::size_t offset_of(int p) const { return comp_offset.at(p); }
    std::size_t dim_of(int p) const { return comp_dim.at(p); }
};

/// Degree-raising map on a single component: image lands in the two
/// adjacent blocks of the next level, laid out per DegreeLevel. Splitting
/// u = v + w by the coordinate split, the V part raises tensor degree and
/// the W part raises wedge degree.
inline Matrix coboundary_u(const PrimeField& f, const SpaceSpec& s, const std::vector<u64>& u, int p, int q) {
    if (u.size() != s.dim_u()) throw std::invalid_argument("coboundary_u: vector not in U");
    std::vector<u64> v(u.begin(), u.begin() + s.dim_v);
    std::vector<u64> w(u.begin() + s.dim_v, u.end());
    DegreeLevel next(s, p + q + 1);
    Matrix mv = coboundary_v(f, s, v, p, q);   // into component p+1
    Matrix mw = coboundary_w(f, s, w, p, q);   // into component p
    Matrix out(f, next.dim(), mv.cols());
    for (std::size_t j = 0; j < mv.cols(); ++j) {
        for (std::size_t i = 0; i < mv.rows(); ++i) {
            if (mv.at(i, j) != 0) out.at(next.offset_of(p + 1) + i, j) = mv.at(i, j);
        }
        for (std::size_t i = 0; i < mw.rows(); ++i) {
            if (mw.at(i, j) != 0) out.at(next.offset_of(p) + i, j) = mw.at(i, j);
        }
    }
    return out;
}

/// Full degree-raising map between consecutive levels.
inline Matrix coboundary_u_level(const PrimeField& f, const SpaceSpec& s, const std::vector<u64>& u, int level) {
    DegreeLevel dom(s, level), cod(s, level + 1);
    Matrix out(f, cod.dim(), dom.dim());
    for (int p = 0; p <= level; ++p) {
        if (dom.dim_of(p) == 0) continue;
        Matrix block = coboundary_u(f, s, u, p, level - p);
        for (std::size_t j = 0; j < block.cols(); ++j) {
            for (std::size_t i = 0; i < block.rows(); ++i) {
                if (block.at(i, j) != 0) out.at(i, dom.offset_of(p) + j) = block.at(i, j);
            }
        }
    }
    return out;
}

}  // namespace grc
