#pragma once

#include <random>

#include "grc/engine.hpp"
#include "grc/multilinear.hpp"

namespace grc {

/// Number of elements of the sorted set A that are <= j (so the position
/// of j within A, counted from one, when j is a member).
inline int subset_tau(const BasisIndex& a, int j) {
    int c = 0;
    for (int x : a)
        if (x <= j) ++c;
    return c;
}

/// Interior-point parameters of the stacked construction indexed by mu:
///   l = sum_m (d-k)^{mu-m} C(k, m),   beta = sum_m (d-k)^{mu-m} C(k-1, m-1),
///   M = k l - C(k, mu+1).
/// mu = k collapses to the minimum-storage corner, mu = 1 to the
/// minimum-bandwidth corner, and d = k to the mode-mu determinant code.
inline CodeParams cascade_params(int k, int d, int mu) {
    if (!(1 <= mu && mu <= k && k <= d)) throw std::invalid_argument("cascade_params: need 1 <= mu <= k <= d");
    long long l = 0, beta = 0;
    for (int m = 0; m <= mu; ++m) {
        l += ipow(d - k, mu - m) * binom(k, m);
        beta += ipow(d - k, mu - m) * binom(k - 1, m - 1);
    }
    return {"cascade", 0, k, d, l, beta, (long long)k * l - binom(k, mu + 1)};
}

/// Determinant code of mode m with d = k: the file fills an l_m x d data
/// matrix D whose rows are indexed by m-subsets of [d]; column j of D
/// holds the free symbols v_{A,j} (j in A) and the parity-completed
/// symbols w_{A+{j}, j} (j not in A), where each (m+1)-subset S satisfies
/// sum_{j in S} (-1)^{tau_S(j)} w_{S,j} = 0. Node i stores column i of
/// D Phi for a d x n Vandermonde encoder Phi.
class DetCode : public RepairableCode {
  public:
    DetCode(const PrimeField& f, int n, int k, int m, std::vector<u64> file)
        : f_(f), n_(n), k_(k), m_(m), file_(std::move(file)), phi_(make_encoder(f, n, k)) {
        if (!(1 <= m && m <= k)) throw std::invalid_argument("DetCode: need 1 <= m <= k");
        if (k > n - 1) throw std::invalid_argument("DetCode: need d = k <= n-1");
        if ((u64)n >= f.modulus()) throw std::invalid_argument("DetCode: field too small for n points");
        subsets_m_ = ext_basis(k, m);
        subsets_m1_ = ext_basis(k, m + 1);
        subsets_lo_ = ext_basis(k, m - 1);
        if ((long long)file_.size() != file_size()) throw std::invalid_argument("DetCode: file size != M");
        for (auto& v : file_) v %= f.modulus();
    }

    static std::vector<u64> random_file(const PrimeField& f, int k, int m, u64 seed) {
        std::mt19937_64 rng(seed);
        std::vector<u64> file((std::size_t)(m * binom(k + 1, m + 1)));
        for (auto& v : file) v = rng() % f.modulus();
        return file;
    }

    long long file_size() const { return (long long)m_ * binom(k_ + 1, m_ + 1); }
    long long storage() const { return binom(k_, m_); }
    long long share_bound() const { return binom(k_ - 1, m_ - 1); }
    const Matrix& encoder() const { return phi_; }

    /// The l_{m+1} x d parity-completed matrix of w symbols.
    Matrix w_matrix() const {
        Matrix w(f_, subsets_m1_.size(), k_);
        std::size_t sym = (std::size_t)(m_ * binom(k_, m_));  // w symbols follow the v symbols
        for (std::size_t si = 0; si < subsets_m1_.size(); ++si) {
            const BasisIndex& s = subsets_m1_[si];
            u64 parity = 0;
            for (std::size_t pos = 0; pos + 1 < s.size(); ++pos, ++sym) {
                w.at(si, s[pos]) = file_[sym];
                u64 term = f_.mul(f_.sign(subset_tau(s, s[pos])), file_[sym]);
                parity = f_.add(parity, term);
            }
            int last = s.back();
            // completion: the largest index absorbs the alternating sum
            w.at(si, last) = f_.mul(f_.neg(parity), f_.sign(subset_tau(s, last)));
        }
        return w;
    }

    /// The l_m x d data matrix.
    Matrix data_matrix() const {
        Matrix w = w_matrix();
        Matrix d(f_, subsets_m_.size(), k_);
        std::size_t sym = 0;
        for (std::size_t ai = 0; ai < subsets_m_.size(); ++ai) {
            for (int j : subsets_m_[ai]) {
                d.at(ai, j) = file_[sym++];
            }
        }
        for (std::size_t ai = 0; ai < subsets_m_.size(); ++ai) {
            const BasisIndex& a = subsets_m_[ai];
            for (int j = 0; j < k_; ++j) {
                if (std::find(a.begin(), a.end(), j) != a.end()) continue;
                BasisIndex s = a;
                s.insert(std::lower_bound(s.begin(), s.end(), j), j);
                d.at(ai, j) = w.at(basis_rank(subsets_m1_, s), j);
            }
        }
        return d;
    }

    /// Repair matrix for failed node f: R_{B,A} = (-1)^{tau_A(j)} Phi_{j,f}
    /// when A = B + {j}. Its rank is at most beta_m.
    Matrix repair_matrix(int fail) const {
        Matrix r(f_, subsets_lo_.size(), subsets_m_.size());
        for (std::size_t ai = 0; ai < subsets_m_.size(); ++ai) {
            const BasisIndex& a = subsets_m_[ai];
            for (std::size_t pos = 0; pos < a.size(); ++pos) {
                int j = a[pos];
                BasisIndex b = a;
                b.erase(b.begin() + pos);
                u64 coeff = f_.mul(f_.sign(subset_tau(a, j)), phi_.at(j, fail));
                r.at(basis_rank(subsets_lo_, b), ai) = coeff;
            }
        }
        return r;
    }

    /// Recovery of the failed column from the expanded downloads
    /// R C_{:,i}: invert Phi_{:,H} to get R D, then read each coordinate
    /// off the alternating sum over its subset.
    std::vector<u64> classic_repair(int fail, const std::vector<int>& helpers) const {
        Matrix r = repair_matrix(fail);
        Matrix t(f_, subsets_lo_.size(), helpers.size());
        for (std::size_t hp = 0; hp < helpers.size(); ++hp) {
            std::vector<u64> share = r * node_content(helpers[hp]);
            for (std::size_t i = 0; i < share.size(); ++i) t.at(i, hp) = share[i];
        }
        Matrix rd = t * helper_encoder_inverse(helpers);
        std::vector<u64> column(subsets_m_.size(), 0);
        for (std::size_t ai = 0; ai < subsets_m_.size(); ++ai) {
            const BasisIndex& a = subsets_m_[ai];
            u64 acc = 0;
            for (std::size_t pos = 0; pos < a.size(); ++pos) {
                int i = a[pos];
                BasisIndex b = a;
                b.erase(b.begin() + pos);
                u64 term = f_.mul(rd.at(basis_rank(subsets_lo_, b), i), f_.sign(subset_tau(a, i)));
                acc = f_.add(acc, term);
            }
            column[ai] = acc;
        }
        return column;
    }

    /// Row-selection matrices W^{(j)}: row A is the signed R row of A-{j}
    /// when j is in A and zero otherwise.
    Matrix pipeline_w(int fail, int j) const {
        Matrix r = repair_matrix(fail);
        Matrix w(f_, subsets_m_.size(), subsets_m_.size());
        for (std::size_t ai = 0; ai < subsets_m_.size(); ++ai) {
            const BasisIndex& a = subsets_m_[ai];
            auto it = std::find(a.begin(), a.end(), j);
            if (it == a.end()) continue;
            BasisIndex b = a;
            b.erase(b.begin() + (it - a.begin()));
            u64 sgn = f_.sign(subset_tau(a, j));
            std::size_t br = basis_rank(subsets_lo_, b);
            for (std::size_t c = 0; c < subsets_m_.size(); ++c) w.at(ai, c) = f_.mul(sgn, r.at(br, c));
        }
        return w;
    }

    /// Per-helper matrices with sum_i U^{(i)} C_{:,h_i} equal to the
    /// failed column.
    std::vector<Matrix> pipeline_u(int fail, const std::vector<int>& helpers) const {
        Matrix inv = helper_encoder_inverse(helpers);
        std::vector<Matrix> ws;
        for (int j = 0; j < k_; ++j) ws.push_back(pipeline_w(fail, j));
        std::vector<Matrix> us;
        for (std::size_t hp = 0; hp < helpers.size(); ++hp) {
            Matrix u(f_, subsets_m_.size(), subsets_m_.size());
            for (int j = 0; j < k_; ++j) u = u + ws[j].scaled(inv.at(hp, j));
            us.push_back(std::move(u));
        }
        return us;
    }

    const PrimeField& field() const override { return f_; }

    CodeParams params() const override { return {"det", n_, k_, k_, storage(), share_bound(), file_size()}; }

    std::vector<u64> node_content(int i) const override { return data_matrix() * phi_.col(i); }

    /// Coordinates of R C_{:,i} over the pivot-column basis of R; the
    /// receiver re-expands losslessly through the same factorization.
    std::vector<u64> helper_share(int fail, int i) const override {
        auto [c, rr] = repair_matrix(fail).rank_factorize();
        (void)c;
        return rr * node_content(i);
    }

    Matrix lift_matrix(int fail, const std::vector<int>& helpers, int h) const override {
        auto [c, rr] = repair_matrix(fail).rank_factorize();
        (void)rr;
        Matrix inv = helper_encoder_inverse(helpers);
        std::size_t hpos = 0;
        while (helpers[hpos] != h) ++hpos;
        // signed selection of expanded share coordinates, one (A, j) pair
        // per subset containment
        Matrix p(f_, subsets_m_.size(), subsets_lo_.size());
        for (std::size_t ai = 0; ai < subsets_m_.size(); ++ai) {
            const BasisIndex& a = subsets_m_[ai];
            for (std::size_t pos = 0; pos < a.size(); ++pos) {
                int j = a[pos];
                BasisIndex b = a;
                b.erase(b.begin() + pos);
                u64 coeff = f_.mul(f_.sign(subset_tau(a, j)), inv.at(hpos, j));
                std::size_t br = basis_rank(subsets_lo_, b);
                p.at(ai, br) = f_.add(p.at(ai, br), coeff);
            }
        }
        return p * c;
    }

    Matrix node_encoder(int i) const override {
        Matrix e(f_, subsets_m_.size(), file_.size());
        Matrix d_map = data_entry_map();
        for (std::size_t ai = 0; ai < subsets_m_.size(); ++ai) {
            for (int j = 0; j < k_; ++j) {
                u64 scale = phi_.at(j, i);
                if (scale == 0) continue;
                for (std::size_t sym = 0; sym < file_.size(); ++sym) {
                    u64 coef = d_map.at(ai * k_ + j, sym);
                    if (coef != 0) e.at(ai, sym) = f_.add(e.at(ai, sym), f_.mul(scale, coef));
                }
            }
        }
        return e;
    }

    std::vector<u64> file() const override { return file_; }

  private:
    // d x n with column i = (1, x_i, ..., x_i^{d-1})^t
    static Matrix make_encoder(const PrimeField& f, int n, int k) {
        std::vector<u64> pts(n);
        for (int i = 0; i < n; ++i) pts[i] = (u64)(i + 1);
        return Matrix::vandermonde(f, pts, k).transpose();
    }

    Matrix helper_encoder_inverse(const std::vector<int>& helpers) const {
        if ((int)helpers.size() != k_) throw std::invalid_argument("DetCode: need d helpers");
        std::vector<std::size_t> cols(helpers.begin(), helpers.end());
        return phi_.columns(cols).inverse();
    }

    /// Linear map file -> flattened data matrix (row-major (A, j)).
    Matrix data_entry_map() const {
        Matrix map(f_, subsets_m_.size() * k_, file_.size());
        std::size_t sym = 0;
        for (std::size_t ai = 0; ai < subsets_m_.size(); ++ai) {
            for (int j : subsets_m_[ai]) map.at(ai * k_ + j, sym++) = 1;
        }
        // w symbols: free entries verbatim, the largest index of each
        // (m+1)-subset as the signed combination closing its parity check
        for (std::size_t si = 0; si < subsets_m1_.size(); ++si) {
            const BasisIndex& s = subsets_m1_[si];
            int last = s.back();
            u64 last_sign = f_.sign(subset_tau(s, last));
            for (std::size_t pos = 0; pos + 1 < s.size(); ++pos, ++sym) {
                int j = s[pos];
                BasisIndex a = s;
                a.erase(a.begin() + pos);
                map.at(basis_rank(subsets_m_, a) * k_ + j, sym) = 1;
                BasisIndex a_last = s;
                a_last.pop_back();
                u64 coeff = f_.mul(f_.neg(last_sign), f_.sign(subset_tau(s, j)));
                map.at(basis_rank(subsets_m_, a_last) * k_ + last, sym) = coeff;
            }
        }
        return map;
    }

    PrimeField f_;
    int n_, k_, m_;
    std::vector<BasisIndex> subsets_m_, subsets_m1_, subsets_lo_;
    std::vector<u64> file_;
    Matrix phi_;
};

}  // namespace grc
