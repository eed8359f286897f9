#pragma once

#include <vector>

#include "grc/field.hpp"

namespace grc::poly {

// Polynomials are coefficient vectors, lowest degree first. A trailing
// zero coefficient is allowed; degree helpers ignore it.

inline std::vector<u64> trim(std::vector<u64> a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline u64 eval(const PrimeField& f, const std::vector<u64>& a, u64 x) {
    u64 acc = 0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = f.add(f.mul(acc, x), *it);
    return acc;
}

inline std::vector<u64> add(const PrimeField& f, const std::vector<u64>& a, const std::vector<u64>& b) {
    std::vector<u64> r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        u64 x = i < a.size() ? a[i] : 0;
        u64 y = i < b.size() ? b[i] : 0;
        r[i] = f.add(x, y);
    }
    return r;
}

inline std::vector<u64> scale(const PrimeField& f, const std::vector<u64>& a, u64 c) {
    std::vector<u64> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
    return r;
}

inline std::vector<u64> mul(const PrimeField& f, const std::vector<u64>& a, const std::vector<u64>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<u64> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
        }
    }
    return r;
}

/// Quotient and remainder of a / b. Throws on zero divisor.
inline std::pair<std::vector<u64>, std::vector<u64>> divmod(const PrimeField& f, std::vector<u64> a,
                                                            const std::vector<u64>& b_in) {
    std::vector<u64> b = trim(b_in);
    if (b.empty()) throw std::domain_error("poly::divmod: division by zero polynomial");
    a = trim(std::move(a));
    std::vector<u64> q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
    u64 lead_inv = f.inv(b.back());
    while (a.size() >= b.size()) {
        std::size_t shift = a.size() - b.size();
        u64 c = f.mul(a.back(), lead_inv);
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[shift + i] = f.sub(a[shift + i], f.mul(c, b[i]));
        }
        a = trim(std::move(a));
        if (a.empty()) break;
        if (a.size() > shift + b.size()) throw std::logic_error("poly::divmod: reduction failed");
    }
    return {std::move(q), std::move(a)};
}

/// Monic polynomial with the given roots: prod (x - r_i).
inline std::vector<u64> from_roots(const PrimeField& f, const std::vector<u64>& roots) {
    std::vector<u64> r{1};
    for (u64 root : roots) r = mul(f, r, {f.neg(root), 1});
    return r;
}

/// Coefficients of the polynomial of degree < points.size() interpolating
/// the given (x, y) pairs. Points must be distinct.
inline std::vector<u64> interpolate(const PrimeField& f, const std::vector<u64>& xs, const std::vector<u64>& ys) {
    std::size_t n = xs.size();
    std::vector<u64> acc(n, 0);
    for (std::size_t h = 0; h < n; ++h) {
        std::vector<u64> basis{1};
        u64 denom = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == h) continue;
            basis = mul(f, basis, {f.neg(xs[i]), 1});
            denom = f.mul(denom, f.sub(xs[h], xs[i]));
        }
        basis = scale(f, basis, f.mul(ys[h], f.inv(denom)));
        acc = add(f, acc, basis);
    }
    acc.resize(n, 0);
    return acc;
}

}  // namespace grc::poly
