#pragma once

#include <random>
#include <set>

#include "grc/engine.hpp"
#include "grc/poly.hpp"

namespace grc {

/// Coefficients of the Lagrange basis polynomial for the helper point
/// a_h over the helper point set: degree < |points|, value 1 at a_h and
/// 0 at every other point.
inline std::vector<u64> lagrange_coeffs(const PrimeField& f, const std::vector<u64>& points, std::size_t h) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw std::invalid_argument("lagrange_coeffs: duplicate point");
    std::vector<u64> basis{1};
    u64 denom = 1;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i == h) continue;
        basis = poly::mul(f, basis, {f.neg(points[i]), 1});
        denom = f.mul(denom, f.sub(points[h], points[i]));
    }
    basis = poly::scale(f, basis, f.inv(denom));
    basis.resize(points.size(), 0);
    return basis;
}

/// Product-matrix code at the MSR point, in evaluation form. The file is
/// a pair of symmetric polynomials s1, s2 of degree <= k-2 in each
/// variable; node i stores the l = k-1 coefficients of
///   g_i(z) = s1(a_i, z) + a_i^{k-1} s2(a_i, z).
/// Parameters: d = 2(k-1), beta = 1, M = k(k-1).
class PmMsrCode : public RepairableCode {
  public:
    PmMsrCode(const PrimeField& f, int n, int k, std::vector<u64> file) : f_(f), n_(n), k_(k), file_(std::move(file)) {
        if (k < 2) throw std::invalid_argument("PmMsrCode: k must be at least 2");
        if (2 * (k - 1) > n - 1) throw std::invalid_argument("PmMsrCode: need d = 2(k-1) <= n-1");
        if ((u64)n >= f.modulus()) throw std::invalid_argument("PmMsrCode: field too small for n points");
        if ((long long)file_.size() != (long long)k * (k - 1)) throw std::invalid_argument("PmMsrCode: file size != M");
        for (auto& v : file_) v %= f.modulus();
    }

    static std::vector<u64> random_file(const PrimeField& f, int k, u64 seed) {
        std::mt19937_64 rng(seed);
        std::vector<u64> file(k * (k - 1));
        for (auto& v : file) v = rng() % f.modulus();
        return file;
    }

    /// Pack two full symmetric coefficient matrices into the canonical
    /// file layout (upper triangles, s1 then s2). Rejects asymmetry.
    static std::vector<u64> file_from_matrices(const Matrix& s1, const Matrix& s2) {
        auto check = [](const Matrix& s) {
            if (s.rows() != s.cols()) throw std::invalid_argument("PmMsrCode: coefficient matrix not square");
            for (std::size_t r = 0; r < s.rows(); ++r)
                for (std::size_t c = r + 1; c < s.cols(); ++c)
                    if (s.at(r, c) != s.at(c, r)) throw std::invalid_argument("PmMsrCode: coefficient matrix not symmetric");
        };
        check(s1);
        check(s2);
        std::vector<u64> file;
        for (const Matrix* s : {&s1, &s2})
            for (std::size_t r = 0; r < s->rows(); ++r)
                for (std::size_t c = r; c < s->cols(); ++c) file.push_back(s->at(r, c));
        return file;
    }

    u64 point(int i) const { return (u64)(i + 1); }

    const PrimeField& field() const override { return f_; }

    CodeParams params() const override {
        return {"pm-msr", n_, k_, 2 * (k_ - 1), k_ - 1, 1, (long long)k_ * (k_ - 1)};
    }

    std::vector<u64> node_content(int i) const override { return node_encoder(i) * file_; }

    std::vector<u64> helper_share(int f, int h) const override {
        (void)f;
        return {poly::eval(f_, node_content(h), point(f))};
    }

    Matrix lift_matrix(int f, const std::vector<int>& helpers, int h) const override {
        std::vector<u64> pts;
        std::size_t hpos = 0;
        for (std::size_t i = 0; i < helpers.size(); ++i) {
            if (helpers[i] == h) hpos = i;
            pts.push_back(point(helpers[i]));
        }
        std::vector<u64> lag = lagrange_coeffs(f_, pts, hpos);
        u64 af_pow = f_.pow(point(f), k_ - 1);
        Matrix m(f_, k_ - 1, 1);
        for (int c = 0; c < k_ - 1; ++c) m.at(c, 0) = f_.add(lag[c], f_.mul(af_pow, lag[k_ - 1 + c]));
        return m;
    }

    Matrix node_encoder(int i) const override {
        int l = k_ - 1;
        Matrix e(f_, l, file_.size());
        u64 a = point(i);
        u64 a_hi = f_.pow(a, k_ - 1);
        std::size_t sym = 0;
        for (int part = 0; part < 2; ++part) {
            u64 mult = part == 0 ? 1 : a_hi;
            for (int r = 0; r < l; ++r) {
                for (int c = r; c < l; ++c, ++sym) {
                    // symbol sits at (r, c) and (c, r) of the symmetric matrix
                    e.at(c, sym) = f_.add(e.at(c, sym), f_.mul(mult, f_.pow(a, r)));
                    if (r != c) e.at(r, sym) = f_.add(e.at(r, sym), f_.mul(mult, f_.pow(a, c)));
                }
            }
        }
        return e;
    }

    std::vector<u64> file() const override { return file_; }

  private:
    PrimeField f_;
    int n_, k_;
    std::vector<u64> file_;
};

/// Product-matrix code at the MBR point. The file is one symmetric
/// polynomial s(y, z) whose d x d coefficient matrix has the block form
/// [[S, T], [T^t, 0]] with S symmetric k x k; node i stores the d
/// coefficients of g_i(z) = s(x_i, z). Parameters: l = d, beta = 1,
/// M = kd - C(k,2).
class PmMbrCode : public RepairableCode {
  public:
    PmMbrCode(const PrimeField& f, int n, int k, int d, std::vector<u64> file)
        : f_(f), n_(n), k_(k), d_(d), file_(std::move(file)) {
        if (!(1 <= k && k <= d && d <= n - 1)) throw std::invalid_argument("PmMbrCode: need 1 <= k <= d <= n-1");
        if ((u64)n >= f.modulus()) throw std::invalid_argument("PmMbrCode: field too small for n points");
        if ((long long)file_.size() != file_size()) throw std::invalid_argument("PmMbrCode: file size != M");
        for (auto& v : file_) v %= f.modulus();
    }

    static std::vector<u64> random_file(const PrimeField& f, int k, int d, u64 seed) {
        std::mt19937_64 rng(seed);
        std::vector<u64> file(k * d - k * (k - 1) / 2);
        for (auto& v : file) v = rng() % f.modulus();
        return file;
    }

    long long file_size() const { return (long long)k_ * d_ - (long long)k_ * (k_ - 1) / 2; }
    u64 point(int i) const { return (u64)(i + 1); }

    /// The d x d symmetric coefficient matrix of s(y, z).
    Matrix coefficient_matrix() const {
        Matrix b(f_, d_, d_);
        std::size_t sym = 0;
        for (int r = 0; r < k_; ++r) {
            for (int c = r; c < k_; ++c, ++sym) {
                b.at(r, c) = file_[sym];
                b.at(c, r) = file_[sym];
            }
        }
        for (int r = 0; r < k_; ++r) {
            for (int c = k_; c < d_; ++c, ++sym) {
                b.at(r, c) = file_[sym];
                b.at(c, r) = file_[sym];
            }
        }
        return b;
    }

    const PrimeField& field() const override { return f_; }

    CodeParams params() const override { return {"pm-mbr", n_, k_, d_, d_, 1, file_size()}; }

    std::vector<u64> node_content(int i) const override { return node_encoder(i) * file_; }

    std::vector<u64> helper_share(int f, int h) const override {
        return {poly::eval(f_, node_content(h), point(f))};
    }

    Matrix lift_matrix(int f, const std::vector<int>& helpers, int h) const override {
        (void)f;
        std::vector<u64> pts;
        std::size_t hpos = 0;
        for (std::size_t i = 0; i < helpers.size(); ++i) {
            if (helpers[i] == h) hpos = i;
            pts.push_back(point(helpers[i]));
        }
        std::vector<u64> lag = lagrange_coeffs(f_, pts, hpos);
        Matrix m(f_, d_, 1);
        for (int c = 0; c < d_; ++c) m.at(c, 0) = lag[c];
        return m;
    }

    Matrix node_encoder(int i) const override {
        Matrix e(f_, d_, file_.size());
        u64 a = point(i);
        std::size_t sym = 0;
        auto place = [&](int r, int c, std::size_t symbol) {
            e.at(c, symbol) = f_.add(e.at(c, symbol), f_.pow(a, r));
            if (r != c) e.at(r, symbol) = f_.add(e.at(r, symbol), f_.pow(a, c));
        };
        for (int r = 0; r < k_; ++r)
            for (int c = r; c < k_; ++c, ++sym) place(r, c, sym);
        for (int r = 0; r < k_; ++r)
            for (int c = k_; c < d_; ++c, ++sym) place(r, c, sym);
        return e;
    }

    std::vector<u64> file() const override { return file_; }

    /// Evaluation points used by the triangular retrieval scheme: the
    /// chosen nodes first, then the remaining node points ascending,
    /// truncated to d entries.
    std::vector<int> retrieval_points(const std::vector<int>& ordered_nodes) const {
        std::vector<int> pts = ordered_nodes;
        std::set<int> used(ordered_nodes.begin(), ordered_nodes.end());
        for (int i = 0; i < n_ && (int)pts.size() < d_; ++i) {
            if (!used.count(i)) pts.push_back(i);
        }
        return pts;
    }

    /// Per-node symbol lists of the triangular retrieval scheme: the node
    /// at rank r contributes g at the last d - r retrieval points, the
    /// earlier evaluations being recoverable through the symmetry
    /// g_i(x_j) = g_j(x_i). Sizes are (d, d-1, ..., d-k+1); total M.
    std::vector<std::vector<u64>> triangular_shares(const std::vector<int>& ordered_nodes) const {
        if ((int)ordered_nodes.size() != k_) throw std::invalid_argument("triangular_shares: need k nodes");
        auto pts = retrieval_points(ordered_nodes);
        std::vector<std::vector<u64>> shares;
        for (int r = 0; r < k_; ++r) {
            std::vector<u64> contents = node_content(ordered_nodes[r]);
            std::vector<u64> s;
            for (int j = r; j < d_; ++j) s.push_back(poly::eval(f_, contents, point(pts[j])));
            shares.push_back(std::move(s));
        }
        return shares;
    }

    /// Sequential interpolation: each rank's polynomial is recovered from
    /// its transmitted evaluations plus the symmetry-supplied ones, then
    /// the file is read off the k full columns.
    std::vector<u64> triangular_decode(const std::vector<int>& ordered_nodes,
                                       const std::vector<std::vector<u64>>& shares) const {
        auto pts = retrieval_points(ordered_nodes);
        std::vector<std::vector<u64>> polys(k_);
        for (int r = 0; r < k_; ++r) {
            std::vector<u64> xs, ys;
            for (int j = 0; j < r; ++j) {
                xs.push_back(point(pts[j]));
                ys.push_back(poly::eval(f_, polys[j], point(ordered_nodes[r])));
            }
            for (int j = r; j < d_; ++j) {
                xs.push_back(point(pts[j]));
                ys.push_back(shares[r][j - r]);
            }
            polys[r] = poly::interpolate(f_, xs, ys);
        }
        std::vector<std::vector<u64>> columns(polys.begin(), polys.end());
        return decode_from_columns(ordered_nodes, columns);
    }

    /// Recover the file from k full node columns: the right block of the
    /// stacked coefficient rows gives T, then S follows.
    std::vector<u64> decode_from_columns(const std::vector<int>& nodes,
                                         const std::vector<std::vector<u64>>& columns) const {
        if ((int)nodes.size() != k_) throw std::invalid_argument("decode_from_columns: need k nodes");
        Matrix g(f_, k_, d_);
        for (int i = 0; i < k_; ++i)
            for (int c = 0; c < d_; ++c) g.at(i, c) = columns[i][c];
        std::vector<u64> pts;
        for (int i : nodes) pts.push_back(point(i));
        Matrix psi = Matrix::vandermonde(f_, pts, d_);
        Matrix psi1(f_, k_, k_), psi2(f_, k_, d_ - k_);
        for (int i = 0; i < k_; ++i) {
            for (int c = 0; c < k_; ++c) psi1.at(i, c) = psi.at(i, c);
            for (int c = k_; c < d_; ++c) psi2.at(i, c - k_) = psi.at(i, c);
        }
        Matrix psi1_inv = psi1.inverse();
        Matrix g_left(f_, k_, k_), g_right(f_, k_, d_ - k_);
        for (int i = 0; i < k_; ++i) {
            for (int c = 0; c < k_; ++c) g_left.at(i, c) = g.at(i, c);
            for (int c = k_; c < d_; ++c) g_right.at(i, c - k_) = g.at(i, c);
        }
        Matrix t = psi1_inv * g_right;
        Matrix s = psi1_inv * (g_left - psi2 * t.transpose());
        std::vector<u64> file;
        for (int r = 0; r < k_; ++r)
            for (int c = r; c < k_; ++c) file.push_back(s.at(r, c));
        for (int r = 0; r < k_; ++r)
            for (int c = 0; c < d_ - k_; ++c) file.push_back(t.at(r, c));
        return file;
    }

  private:
    PrimeField f_;
    int n_, k_, d_;
    std::vector<u64> file_;
};

}  // namespace grc
