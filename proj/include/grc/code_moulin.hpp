#pragma once

#include <random>

#include "grc/engine.hpp"
#include "grc/multilinear.hpp"

namespace grc {

/// Interior-point evaluation code on the graded space
///   L = (+)_{p+q=s-1} T^pV (x) U (x) Λ^qW,   V = F^{d-k}, W = F^k.
///
/// The file is a functional phi on L annihilating three classes of parity
/// rows: for every x in T^pV (x) Λ^{q+1}W (p >= 1, p+q = s-1) the value on
/// the trailing-V embedding of x equals the value on the W-embedding of
/// the lowered tensor of x; the W-embedded lowerings of Λ^s W evaluate to
/// zero; and phi vanishes on T^{s-1}V (x) V. Node i keeps phi restricted
/// to the blocks T^pV (x) u_i (x) Λ^qW.
///
/// Repair of node f downloads phi restricted to an image basis of the
/// degree-raising map along u_f applied to each helper's blocks one level
/// down; the failed coordinates are recovered through the identity
///   phi(d_{u_f}(nabla(nu (x) om))) - phi(d_{u_f}(nu (x) om))
///     = (-1)^p phi(nu (x) u_f (x) om),
/// expanding both arguments over the helpers' lower-level blocks.
class MoulinCode : public RepairableCode {
  public:
    MoulinCode(const PrimeField& f, int n, int k, int d, int s, std::vector<u64> file, u64 seed = 1)
        : f_(f), n_(validated_n(n, k, d, s)), k_(k), d_(d), s_(s), spec_{(std::size_t)(d - k), (std::size_t)k},
          top_(spec_, s - 1), mid_(spec_, s - 2) {
        build_layouts();
        parity_ = build_parity();
        file_basis_ = parity_.nullspace();
        if ((long long)file.size() != (long long)file_basis_.cols()) {
            throw std::invalid_argument("MoulinCode: file size != M");
        }
        file_ = std::move(file);
        for (auto& v : file_) v %= f.modulus();
        phi_ = file_basis_ * file_;
        choose_vectors(seed);
    }

    /// Parameters of the family:
    ///   l = sum_{p+q=s-1} (d-k)^p C(k, q)
    ///   beta = sum_{p+q=s-2} (d-k)^p C(k-1, q)
    ///   M = sum_{p+q=s-1} d (d-k)^p C(k, q) - sum_{p+q=s} (d-k)^p C(k, q)
    static CodeParams family_params(int n, int k, int d, int s) {
        long long l = 0, beta = 0, m = 0;
        for (int p = 0; p <= s - 1; ++p) l += ipow(d - k, p) * binom(k, s - 1 - p);
        for (int p = 0; p <= s - 2; ++p) beta += ipow(d - k, p) * binom(k - 1, s - 2 - p);
        for (int p = 0; p <= s - 1; ++p) m += (long long)d * ipow(d - k, p) * binom(k, s - 1 - p);
        for (int p = 0; p <= s; ++p) m -= ipow(d - k, p) * binom(k, s - p);
        return {"moulin", n, k, d, l, beta, m};
    }

    static std::vector<u64> random_file(const PrimeField& f, int k, int d, int s, u64 seed) {
        std::mt19937_64 rng(seed);
        std::vector<u64> file((std::size_t)family_params(d + 1, k, d, s).file_size);
        for (auto& v : file) v = rng() % f.modulus();
        return file;
    }

    std::size_t functional_dim() const { return top_.dim(); }
    std::size_t file_space_dim() const { return file_basis_.cols(); }
    const Matrix& parity_matrix() const { return parity_; }
    const std::vector<u64>& functional() const { return phi_; }
    const std::vector<u64>& u_vector(int i) const { return u_[i]; }
    const SpaceSpec& space() const { return spec_; }

    const PrimeField& field() const override { return f_; }

    CodeParams params() const override { return family_params(n_, k_, d_, s_); }

    std::vector<u64> node_content(int i) const override { return node_slot_matrix(i, top_, top_layout_).transpose() * phi_; }

    /// Contents of node i under an explicit functional; rejects any phi
    /// outside the parity-check kernel.
    std::vector<u64> node_content_for(const std::vector<u64>& phi, int i) const {
        if (phi.size() != top_.dim()) throw std::invalid_argument("MoulinCode: functional has wrong length");
        std::vector<u64> residues = parity_ * phi;
        for (u64 r : residues) {
            if (r != 0) throw std::invalid_argument("MoulinCode: functional violates a parity row");
        }
        return node_slot_matrix(i, top_, top_layout_).transpose() * phi;
    }

    /// phi on an image basis (pivot columns) of the degree-raising map
    /// along u_f applied to h's lower-level blocks. The share width is the
    /// rank of that map; beta in all tested instances.
    std::vector<u64> helper_share(int fail, int h) const override {
        Matrix theta = raise_map(fail) * node_slot_matrix(h, mid_, mid_layout_);
        auto [piv, expand] = theta.rank_factorize();
        (void)expand;
        return piv.transpose() * phi_;
    }

    std::size_t share_width(int fail, int h) const {
        Matrix theta = raise_map(fail) * node_slot_matrix(h, mid_, mid_layout_);
        return theta.rank();
    }

    Matrix lift_matrix(int fail, const std::vector<int>& helpers, int h) const override {
        if ((int)helpers.size() != d_) throw std::invalid_argument("MoulinCode: need d helpers");
        Matrix theta = raise_map(fail) * node_slot_matrix(h, mid_, mid_layout_);
        auto [piv, expand] = theta.rank_factorize();  // phi(theta col j) = share . expand[:, j]
        std::size_t hpos = 0;
        while (helpers[hpos] != h) ++hpos;

        Matrix lift(f_, node_dim(top_layout_), piv.cols());
        for (int pm = 0; pm <= s_ - 2; ++pm) {
            int qm = s_ - 2 - pm;
            const auto& tb_mid = mid_layout_[pm].first;
            const auto& wb_mid = mid_layout_[pm].second;
            std::size_t local = tb_mid.size() * wb_mid.size();
            if (local == 0) continue;

            // columns: helper blocks of the mid component; square and
            // nonsingular because the u vectors of any d nodes span U
            Matrix span(f_, mid_.dim_of(pm), helpers.size() * local);
            for (std::size_t hp = 0; hp < helpers.size(); ++hp) {
                const auto& u = u_[helpers[hp]];
                for (std::size_t t = 0; t < tb_mid.size(); ++t) {
                    for (std::size_t w = 0; w < wb_mid.size(); ++w) {
                        for (std::size_t c = 0; c < spec_.dim_u(); ++c) {
                            if (u[c] == 0) continue;
                            span.at((t * spec_.dim_u() + c) * wb_mid.size() + w, hp * local + t * wb_mid.size() + w) =
                                u[c];
                        }
                    }
                }
            }

            // lowered failed coordinates of component (pm, qm+1) and
            // trailing-V embeddings of component (pm+1, qm), expanded in
            // one solve
            std::vector<std::pair<std::size_t, bool>> owners;  // (failed coord, is_lowering)
            Matrix targets(f_, mid_.dim_of(pm), 0);
            std::vector<std::vector<u64>> target_cols;
            if (qm + 1 <= s_ - 1 - pm) {  // component (pm, qm+1) exists in the top level
                const auto& tb = top_layout_[pm].first;
                const auto& wb = top_layout_[pm].second;
                for (std::size_t t = 0; t < tb.size(); ++t) {
                    for (std::size_t w = 0; w < wb.size(); ++w) {
                        std::vector<u64> target(mid_.dim_of(pm), 0);
                        for (auto& term : detail::cowedge_expand(wb[w])) {
                            std::size_t pos = (t * spec_.dim_u() + spec_.dim_v + term.extracted) * wb_mid.size() +
                                              basis_rank(wb_mid, term.rest);
                            target[pos] = f_.add(target[pos], term.sign > 0 ? 1 : f_.neg(1));
                        }
                        target_cols.push_back(std::move(target));
                        owners.push_back({node_offset(top_layout_, pm) + t * wb.size() + w, true});
                    }
                }
            }
            if (pm + 1 <= s_ - 1) {  // component (pm+1, qm) of the top level
                const auto& tb = top_layout_[pm + 1].first;
                const auto& wb = top_layout_[pm + 1].second;
                for (std::size_t t = 0; t < tb.size(); ++t) {
                    const BasisIndex& tuple = tb[t];
                    BasisIndex head(tuple.begin(), tuple.end() - 1);
                    std::size_t head_rank = tuple_rank((int)spec_.dim_v, head);
                    for (std::size_t w = 0; w < wb.size(); ++w) {
                        std::vector<u64> target(mid_.dim_of(pm), 0);
                        target[(head_rank * spec_.dim_u() + tuple.back()) * wb_mid.size() + basis_rank(wb_mid, wb[w])] = 1;
                        target_cols.push_back(std::move(target));
                        owners.push_back({node_offset(top_layout_, pm + 1) + t * wb.size() + w, false});
                    }
                }
            }
            if (target_cols.empty()) continue;
            targets = Matrix(f_, mid_.dim_of(pm), target_cols.size());
            for (std::size_t c = 0; c < target_cols.size(); ++c)
                for (std::size_t r = 0; r < target_cols[c].size(); ++r) targets.at(r, c) = target_cols[c][r];
            Matrix coeffs = span.solve(targets);

            for (std::size_t c = 0; c < owners.size(); ++c) {
                auto [coord, lowering] = owners[c];
                for (std::size_t j = 0; j < local; ++j) {
                    u64 w = coeffs.at(hpos * local + j, c);
                    if (w == 0) continue;
                    if (!lowering) w = f_.neg(w);
                    std::size_t mid_col = node_offset(mid_layout_, pm) + j;
                    for (std::size_t r = 0; r < piv.cols(); ++r) {
                        lift.at(coord, r) = f_.add(lift.at(coord, r), f_.mul(w, expand.at(r, mid_col)));
                    }
                }
            }
        }
        return lift;
    }

    /// Per-coordinate signs (-1)^p by component.
    std::vector<u64> finalize(int fail, const std::vector<u64>& aggregated) const override {
        (void)fail;
        std::vector<u64> out = aggregated;
        for (int p = 0; p <= s_ - 1; ++p) {
            if (p % 2 == 0) continue;
            std::size_t base = node_offset(top_layout_, p);
            std::size_t count = top_layout_[p].first.size() * top_layout_[p].second.size();
            for (std::size_t i = 0; i < count; ++i) out[base + i] = f_.neg(out[base + i]);
        }
        return out;
    }

    Matrix node_encoder(int i) const override {
        return node_slot_matrix(i, top_, top_layout_).transpose() * file_basis_;
    }

    std::vector<u64> file() const override { return file_; }

    /// Degree-raising map along u_f from the share level into L.
    Matrix raise_map(int fail) const { return coboundary_u_level(f_, spec_, u_[fail], s_ - 2); }

    /// Embedding of node i's blocks at the given level: column (p, nu, om)
    /// is nu (x) u_i (x) om in level coordinates.
    Matrix node_slot_matrix(int i, const DegreeLevel& level,
                            const std::vector<std::pair<std::vector<BasisIndex>, std::vector<BasisIndex>>>& layout) const {
        Matrix m(f_, level.dim(), node_dim(layout));
        const auto& u = u_[i];
        for (std::size_t p = 0; p < layout.size(); ++p) {
            const auto& tb = layout[p].first;
            const auto& wb = layout[p].second;
            for (std::size_t t = 0; t < tb.size(); ++t) {
                for (std::size_t w = 0; w < wb.size(); ++w) {
                    std::size_t col = node_offset(layout, p) + t * wb.size() + w;
                    for (std::size_t c = 0; c < spec_.dim_u(); ++c) {
                        if (u[c] == 0) continue;
                        m.at(level.offset_of((int)p) + (t * spec_.dim_u() + c) * wb.size() + w, col) = u[c];
                    }
                }
            }
        }
        return m;
    }

  private:
    static int validated_n(int n, int k, int d, int s) {
        if (!(n - 1 >= d && d >= k && k >= s - 1 && s - 1 >= 1)) {
            throw std::invalid_argument("MoulinCode: need n-1 >= d >= k >= s-1 >= 1");
        }
        return n;
    }

    void build_layouts() {
        for (int p = 0; p <= s_ - 1; ++p) {
            top_layout_.push_back({tensor_basis((int)spec_.dim_v, p), ext_basis((int)spec_.dim_w, s_ - 1 - p)});
        }
        for (int p = 0; p <= s_ - 2; ++p) {
            mid_layout_.push_back({tensor_basis((int)spec_.dim_v, p), ext_basis((int)spec_.dim_w, s_ - 2 - p)});
        }
    }

    static std::size_t node_dim(const std::vector<std::pair<std::vector<BasisIndex>, std::vector<BasisIndex>>>& layout) {
        std::size_t dim = 0;
        for (auto& [tb, wb] : layout) dim += tb.size() * wb.size();
        return dim;
    }

    static std::size_t node_offset(const std::vector<std::pair<std::vector<BasisIndex>, std::vector<BasisIndex>>>& layout,
                                   std::size_t p) {
        std::size_t off = 0;
        for (std::size_t i = 0; i < p; ++i) off += layout[i].first.size() * layout[i].second.size();
        return off;
    }

    /// Parity rows over L. For x = nu (x) om ranging over bases of
    /// T^pV (x) Λ^{s-p}W, p = 0..s: the trailing-V embedding of x (p >= 1)
    /// minus the W-embedded lowering of x (s-p >= 1).
    Matrix build_parity() const {
        std::vector<std::vector<u64>> rows;
        int dv = (int)spec_.dim_v, du = (int)spec_.dim_u();
        for (int p = 0; p <= s_; ++p) {
            int wdeg = s_ - p;
            auto tb = tensor_basis(dv, p);
            auto wb = ext_basis((int)spec_.dim_w, wdeg);
            auto wb_low = ext_basis((int)spec_.dim_w, wdeg - 1);
            for (auto& tuple : tb) {
                for (auto& om : wb) {
                    std::vector<u64> row(top_.dim(), 0);
                    if (p >= 1) {
                        BasisIndex head(tuple.begin(), tuple.end() - 1);
                        std::size_t pos = top_.offset_of(p - 1) +
                                          (tuple_rank(dv, head) * du + tuple.back()) * wb.size() + basis_rank(wb, om);
                        row[pos] = f_.add(row[pos], 1);
                    }
                    if (wdeg >= 1) {
                        for (auto& term : detail::cowedge_expand(om)) {
                            std::size_t pos = top_.offset_of(p) +
                                              (tuple_rank(dv, tuple) * du + spec_.dim_v + term.extracted) * wb_low.size() +
                                              basis_rank(wb_low, term.rest);
                            u64 coeff = term.sign > 0 ? f_.neg(1) : 1;
                            row[pos] = f_.add(row[pos], coeff);
                        }
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
        Matrix parity(f_, rows.size(), top_.dim());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < top_.dim(); ++c) parity.at(r, c) = rows[r][c];
        return parity;
    }

    void choose_vectors(u64 seed) {
        std::mt19937_64 rng(seed);
        for (int attempt = 0; attempt < 200; ++attempt) {
            u_.assign(n_, std::vector<u64>(spec_.dim_u()));
            for (auto& u : u_)
                for (auto& x : u) x = rng() % f_.modulus();
            if (verify_vectors()) return;
        }
        throw std::runtime_error("MoulinCode: could not find node vectors with the required spanning properties");
    }

    bool verify_vectors() const {
        std::vector<int> all(n_);
        for (int i = 0; i < n_; ++i) all[i] = i;
        bool ok = true;
        // every d-subset spans U
        for_each_subset(all, d_, [&](const std::vector<int>& sub) {
            Matrix m(f_, sub.size(), spec_.dim_u());
            for (std::size_t r = 0; r < sub.size(); ++r)
                for (std::size_t c = 0; c < spec_.dim_u(); ++c) m.at(r, c) = u_[sub[r]][c];
            if (m.rank() != spec_.dim_u()) ok = false;
        });
        if (!ok) return false;
        // every k-subset spans the quotient by V, i.e. the W-block rows
        // have full rank
        for_each_subset(all, k_, [&](const std::vector<int>& sub) {
            Matrix m(f_, sub.size(), spec_.dim_w);
            for (std::size_t r = 0; r < sub.size(); ++r)
                for (std::size_t c = 0; c < spec_.dim_w; ++c) m.at(r, c) = u_[sub[r]][spec_.dim_v + c];
            if (m.rank() != spec_.dim_w) ok = false;
        });
        return ok;
    }

    template <typename Fn>
    static void for_each_subset(const std::vector<int>& items, int size, Fn&& fn) {
        std::vector<int> sub;
        auto rec = [&](auto&& self, std::size_t start) -> void {
            if ((int)sub.size() == size) {
                fn(sub);
                return;
            }
            for (std::size_t i = start; i < items.size(); ++i) {
                sub.push_back(items[i]);
                self(self, i + 1);
                sub.pop_back();
            }
        };
        rec(rec, 0);
    }

    PrimeField f_;
    int n_, k_, d_, s_;
    SpaceSpec spec_;
    DegreeLevel top_, mid_;
    std::vector<std::pair<std::vector<BasisIndex>, std::vector<BasisIndex>>> top_layout_, mid_layout_;
    Matrix parity_ = Matrix(PrimeField(2), 0, 0);
    Matrix file_basis_ = Matrix(PrimeField(2), 0, 0);
    std::vector<u64> file_, phi_;
    std::vector<std::vector<u64>> u_;
};

}  // namespace grc
