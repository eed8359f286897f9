#pragma once

#include <random>

#include "grc/engine.hpp"
#include "grc/multilinear.hpp"

namespace grc {

/// MSR evaluation code on X (x) S^t Y with X = F^t, Y = F^{k-t+1}.
/// The file is a functional phi on that space; node i stores phi
/// restricted to x_i (x) y_i . S^{t-1}Y. The per-node vectors satisfy
///   (i)  every t-subset of the x_i spans X,
///   (ii) every (k-t+1)-subset of the y_i spans Y,
///   (iii) every d of the subspaces x_i (x) y_i . S^{t-2}Y
///         span X (x) S^{t-1}Y,
/// all verified exhaustively at construction. Parameters:
///   d = (k-1)t/(t-1), l = C(k-1, t-1), beta = C(k-2, t-2), M = t C(k, t).
class GpmCode : public RepairableCode {
  public:
    GpmCode(const PrimeField& f, int n, int k, int t, std::vector<u64> file, u64 seed = 1)
        : f_(f), n_(n), k_(k), t_(t), file_(std::move(file)) {
        if (!(2 <= t && t <= k && k <= n - 1)) throw std::invalid_argument("GpmCode: need 2 <= t <= k <= n-1");
        if ((u64)n >= f.modulus()) throw std::invalid_argument("GpmCode: field too small for n points");
        if (((k - 1) * t) % (t - 1) != 0) throw std::invalid_argument("GpmCode: (k-1)t not divisible by t-1");
        d_ = (k - 1) * t / (t - 1);
        if (d_ > n - 1) throw std::invalid_argument("GpmCode: derived d exceeds n-1");
        dim_y_ = k - t + 1;
        basis_t_ = sym_basis(dim_y_, t);
        basis_t1_ = sym_basis(dim_y_, t - 1);
        basis_t2_ = sym_basis(dim_y_, t - 2);
        if ((long long)file_.size() != file_size()) throw std::invalid_argument("GpmCode: file size != M");
        for (auto& v : file_) v %= f.modulus();
        choose_vectors(seed);
    }

    static std::vector<u64> random_file(const PrimeField& f, int k, int t, u64 seed) {
        std::mt19937_64 rng(seed);
        std::vector<u64> file((std::size_t)(t * binom(k, t)));
        for (auto& v : file) v = rng() % f.modulus();
        return file;
    }

    long long file_size() const { return (long long)t_ * binom(k_, t_); }
    long long storage() const { return binom(k_ - 1, t_ - 1); }
    long long share_width() const { return binom(k_ - 2, t_ - 2); }

    const std::vector<u64>& x_vector(int i) const { return xs_[i]; }
    const std::vector<u64>& y_vector(int i) const { return ys_[i]; }

    const PrimeField& field() const override { return f_; }

    CodeParams params() const override { return {"gpm", n_, k_, d_, storage(), share_width(), file_size()}; }

    std::vector<u64> node_content(int i) const override { return node_encoder(i) * file_; }

    /// Evaluations phi(x_h (x) y_h . Y_nu . y_f) over the S^{t-2}Y basis.
    std::vector<u64> helper_share(int fail, int h) const override {
        std::vector<u64> share;
        share.reserve(basis_t2_.size());
        for (auto& nu : basis_t2_) {
            std::vector<u64> coords = tensor_coords(xs_[h], ys_[h], nu, &ys_[fail]);
            share.push_back(vec::dot(f_, coords, file_));
        }
        return share;
    }

    /// Expansion of each failed basis vector x_f (x) Y_mu over the spanning
    /// family {x_h (x) (y_h . Y_nu)} inside X (x) S^{t-1}Y; the system is
    /// square by the parameter identity t l = d beta and nonsingular by
    /// condition (iii).
    Matrix lift_matrix(int fail, const std::vector<int>& helpers, int h) const override {
        Matrix system = span_system(helpers);
        Matrix targets(f_, system.rows(), basis_t1_.size());
        for (std::size_t mu = 0; mu < basis_t1_.size(); ++mu) {
            for (int r = 0; r < t_; ++r) {
                targets.at((std::size_t)r * basis_t1_.size() + mu, mu) = xs_[fail][r];
            }
        }
        Matrix coeffs = system.solve(targets);
        std::size_t hpos = 0;
        while (helpers[hpos] != h) ++hpos;
        Matrix lift(f_, basis_t1_.size(), basis_t2_.size());
        for (std::size_t mu = 0; mu < basis_t1_.size(); ++mu)
            for (std::size_t nu = 0; nu < basis_t2_.size(); ++nu)
                lift.at(mu, nu) = coeffs.at(hpos * basis_t2_.size() + nu, mu);
        return lift;
    }

    Matrix node_encoder(int i) const override {
        Matrix e(f_, basis_t1_.size(), file_.size());
        for (std::size_t mu = 0; mu < basis_t1_.size(); ++mu) {
            std::vector<u64> coords = tensor_coords(xs_[i], ys_[i], basis_t1_[mu], nullptr);
            for (std::size_t c = 0; c < coords.size(); ++c) e.at(mu, c) = coords[c];
        }
        return e;
    }

    std::vector<u64> file() const override { return file_; }

  private:
    /// Coordinates of x (x) (y . Y_m [. extra]) in the standard basis of
    /// X (x) S^t Y.
    std::vector<u64> tensor_coords(const std::vector<u64>& x, const std::vector<u64>& y, const BasisIndex& m,
                                   const std::vector<u64>* extra) const {
        std::vector<u64> coords((std::size_t)file_size(), 0);
        for (int r = 0; r < t_; ++r) {
            if (x[r] == 0) continue;
            for (int c1 = 0; c1 < dim_y_; ++c1) {
                if (y[c1] == 0) continue;
                u64 w1 = f_.mul(x[r], y[c1]);
                if (extra) {
                    for (int c2 = 0; c2 < dim_y_; ++c2) {
                        if ((*extra)[c2] == 0) continue;
                        BasisIndex idx = m;
                        idx.insert(std::lower_bound(idx.begin(), idx.end(), c1), c1);
                        idx.insert(std::lower_bound(idx.begin(), idx.end(), c2), c2);
                        std::size_t pos = (std::size_t)r * basis_t_.size() + basis_rank(basis_t_, idx);
                        coords[pos] = f_.add(coords[pos], f_.mul(w1, (*extra)[c2]));
                    }
                } else {
                    BasisIndex idx = m;
                    idx.insert(std::lower_bound(idx.begin(), idx.end(), c1), c1);
                    std::size_t pos = (std::size_t)r * basis_t_.size() + basis_rank(basis_t_, idx);
                    coords[pos] = f_.add(coords[pos], w1);
                }
            }
        }
        return coords;
    }

    /// Columns x_h (x) (y_h . Y_nu) for h in the helper set, as vectors in
    /// X (x) S^{t-1}Y.
    Matrix span_system(const std::vector<int>& helpers) const {
        std::size_t rows = (std::size_t)t_ * basis_t1_.size();
        Matrix system(f_, rows, helpers.size() * basis_t2_.size());
        for (std::size_t hp = 0; hp < helpers.size(); ++hp) {
            int h = helpers[hp];
            for (std::size_t nu = 0; nu < basis_t2_.size(); ++nu) {
                for (int r = 0; r < t_; ++r) {
                    if (xs_[h][r] == 0) continue;
                    for (int c = 0; c < dim_y_; ++c) {
                        if (ys_[h][c] == 0) continue;
                        BasisIndex idx = basis_t2_[nu];
                        idx.insert(std::lower_bound(idx.begin(), idx.end(), c), c);
                        std::size_t row = (std::size_t)r * basis_t1_.size() + basis_rank(basis_t1_, idx);
                        std::size_t col = hp * basis_t2_.size() + nu;
                        system.at(row, col) = f_.add(system.at(row, col), f_.mul(xs_[h][r], ys_[h][c]));
                    }
                }
            }
        }
        return system;
    }

    void choose_vectors(u64 seed) {
        // Structured first choice: x rows spaced so that the combined
        // exponents stay distinct, y rows plain Vandermonde. Falls back to
        // seeded random families when a condition fails.
        int e = (k_ - 1) / (t_ - 1);
        std::mt19937_64 rng(seed);
        for (int attempt = 0; attempt < 200; ++attempt) {
            xs_.assign(n_, std::vector<u64>(t_));
            ys_.assign(n_, std::vector<u64>(dim_y_));
            for (int i = 0; i < n_; ++i) {
                u64 a = (u64)(i + 1);
                for (int r = 0; r < t_; ++r) {
                    xs_[i][r] = attempt == 0 ? f_.pow(a, (u64)r * e) : rng() % f_.modulus();
                }
                for (int c = 0; c < dim_y_; ++c) {
                    ys_[i][c] = attempt == 0 ? f_.pow(a, c) : rng() % f_.modulus();
                }
            }
            if (verify_conditions()) return;
        }
        throw std::runtime_error("GpmCode: could not find vector families satisfying the spanning conditions");
    }

    bool verify_conditions() const {
        std::vector<int> all(n_);
        for (int i = 0; i < n_; ++i) all[i] = i;
        bool ok = true;
        for_each_subset(all, t_, [&](const std::vector<int>& sub) {
            Matrix m(f_, t_, t_);
            for (int r = 0; r < t_; ++r)
                for (int c = 0; c < t_; ++c) m.at(r, c) = xs_[sub[r]][c];
            if (m.rank() != (std::size_t)t_) ok = false;
        });
        if (!ok) return false;
        for_each_subset(all, dim_y_, [&](const std::vector<int>& sub) {
            Matrix m(f_, dim_y_, dim_y_);
            for (int r = 0; r < dim_y_; ++r)
                for (int c = 0; c < dim_y_; ++c) m.at(r, c) = ys_[sub[r]][c];
            if (m.rank() != (std::size_t)dim_y_) ok = false;
        });
        if (!ok) return false;
        for_each_subset(all, d_, [&](const std::vector<int>& sub) {
            Matrix system = span_system(sub);
            if (system.rank() != system.rows()) ok = false;
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
    int n_, k_, t_, d_, dim_y_;
    std::vector<BasisIndex> basis_t_, basis_t1_, basis_t2_;
    std::vector<std::vector<u64>> xs_, ys_;
    std::vector<u64> file_;
};

}  // namespace grc
