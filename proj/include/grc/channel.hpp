#pragma once

#include <algorithm>
#include <random>

#include "grc/engine.hpp"
#include "grc/poly.hpp"

namespace grc {

struct DecodeFailure : std::runtime_error {
    explicit DecodeFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Reed-Solomon codec for one edge message: K message symbols are the
/// coefficients of a polynomial evaluated at the block points. The block
/// length is the smallest N with N - 2 ceil(rho N) >= K, so the unique
/// decoding radius floor((N-K)/2) covers the worst case the channel is
/// allowed to inject.
class RsCodec {
  public:
    RsCodec(const PrimeField& f, std::size_t message_len, const Rational& rho)
        : f_(f), k_(message_len), n_(block_length(message_len, rho)) {
        if (n_ >= f.modulus()) throw std::invalid_argument("RsCodec: block exceeds field size");
    }

    static std::size_t block_length(std::size_t message_len, const Rational& rho) {
        if (rho.num < 0 || 2 * rho.num >= rho.den) throw std::invalid_argument("RsCodec: need 0 <= rho < 1/2");
        long long n = (long long)message_len;
        while (n - 2 * ceil_frac(rho.num * n, rho.den) < (long long)message_len) ++n;
        return (std::size_t)n;
    }

    std::size_t message_len() const { return k_; }
    std::size_t block_len() const { return n_; }
    std::size_t radius() const { return (n_ - k_) / 2; }

    std::vector<u64> encode(const std::vector<u64>& message) const {
        if (message.size() != k_) throw std::invalid_argument("RsCodec: message length mismatch");
        std::vector<u64> block(n_);
        for (std::size_t i = 0; i < n_; ++i) block[i] = poly::eval(f_, message, point(i));
        return block;
    }

    /// Rational-interpolation decoder: find E monic of degree e and Q of
    /// degree < K + e with Q(x_i) = r_i E(x_i), then read off Q / E.
    /// Throws DecodeFailure when no codeword lies within the radius.
    std::vector<u64> decode(const std::vector<u64>& received) const {
        if (received.size() != n_) throw std::invalid_argument("RsCodec: block length mismatch");
        std::size_t e = radius();
        Matrix system(f_, n_, k_ + 2 * e);
        std::vector<u64> rhs(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            u64 x = point(i);
            u64 pw = 1;
            for (std::size_t a = 0; a < k_ + e; ++a) {
                system.at(i, a) = pw;
                pw = f_.mul(pw, x);
            }
            pw = 1;
            for (std::size_t j = 0; j < e; ++j) {
                system.at(i, k_ + e + j) = f_.neg(f_.mul(received[i], pw));
                pw = f_.mul(pw, x);
            }
            rhs[i] = f_.mul(received[i], f_.pow(x, e));
        }
        std::vector<u64> sol;
        try {
            sol = system.solve(rhs);
        } catch (const std::domain_error&) {
            throw DecodeFailure("RsCodec: no solution within the decoding radius");
        }
        std::vector<u64> q(sol.begin(), sol.begin() + (k_ + e));
        std::vector<u64> locator(sol.begin() + (k_ + e), sol.end());
        locator.push_back(1);  // monic
        auto [message, rem] = poly::divmod(f_, q, locator);
        if (!poly::trim(rem).empty()) throw DecodeFailure("RsCodec: locator does not divide the interpolant");
        message.resize(k_, 0);
        std::vector<u64> check = encode(message);
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (check[i] != received[i]) ++mismatches;
        }
        if (mismatches > e) throw DecodeFailure("RsCodec: decoded word outside the radius");
        return message;
    }

    /// The codeword nearest the received block. Receiving nodes can add
    /// the encoding of their own contribution to this directly, since the
    /// code is linear.
    std::vector<u64> nearest_codeword(const std::vector<u64>& received) const { return encode(decode(received)); }

  private:
    static long long ceil_frac(long long num, long long den) { return (num + den - 1) / den; }
    u64 point(std::size_t i) const { return (u64)(i + 1); }

    PrimeField f_;
    std::size_t k_, n_;
};

/// Adversarial edge: corrupts exactly floor(rho N) positions of each
/// block passing through it.
class EdgeChannel {
  public:
    EdgeChannel(const PrimeField& f, const Rational& rho, u64 seed) : f_(f), rho_(rho), rng_(seed) {
        if (rho.num < 0 || 2 * rho.num >= rho.den) throw std::invalid_argument("EdgeChannel: need 0 <= rho < 1/2");
    }

    std::vector<u64> transmit(std::vector<u64> block) {
        std::size_t budget = (std::size_t)((rho_.num * (long long)block.size()) / rho_.den);
        std::vector<std::size_t> positions(block.size());
        for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
        std::shuffle(positions.begin(), positions.end(), rng_);
        for (std::size_t i = 0; i < budget; ++i) {
            u64 delta = rng_() % (f_.modulus() - 1) + 1;
            block[positions[i]] = f_.add(block[positions[i]], delta);
        }
        return block;
    }

  private:
    PrimeField f_;
    Rational rho_;
    std::mt19937_64 rng_;
};

/// IP repair where every edge message crosses a noisy link: the sender
/// wraps its symbols in a Reed-Solomon block sized for the edge, the
/// channel corrupts up to its budget, and the receiver corrects before
/// processing. Edge costs count transmitted block symbols.
inline RepairOutcome simulate_resilient_repair(const RepairableCode& code, const RepairTree& tree,
                                               const Rational& rho, u64 seed) {
    CodeParams cp = code.params();
    if ((int)tree.helpers.size() != cp.d) throw std::invalid_argument("simulate_resilient_repair: helper count != d");
    int fail = tree.root;
    const PrimeField& field = code.field();
    std::size_t l = (std::size_t)cp.l;

    BandwidthReport report;
    report.strategy = "ip-noisy";
    report.lower_bound = repair_lower_bound(tree, cp);
    bool decode_ok = true;

    std::map<int, IpMessage> outbox;
    u64 edge_seed = seed;
    for (int v : tree.bottom_up()) {
        IpMessage msg;
        msg.raw.emplace_back(v, code.helper_share(fail, v));
        bool child_aggregated = false;
        if (tree.children.count(v)) {
            for (int c : tree.children.at(v)) {
                IpMessage& cm = outbox.at(c);
                if (cm.aggregated) {
                    child_aggregated = true;
                } else {
                    for (auto& rs : cm.raw) msg.raw.push_back(rs);
                }
            }
        }
        if (child_aggregated || msg.symbol_count() > cp.l) {
            std::vector<u64> acc = detail::lift_message(code, fail, tree.helpers, msg, l);
            if (tree.children.count(v)) {
                for (int c : tree.children.at(v)) {
                    IpMessage& cm = outbox.at(c);
                    if (cm.aggregated) acc = vec::add(field, acc, cm.agg);
                }
            }
            msg = IpMessage{true, {}, std::move(acc)};
        }

        // serialize, protect, corrupt, and correct the edge message
        std::vector<u64> symbols;
        if (msg.aggregated) {
            symbols = msg.agg;
        } else {
            for (auto& [h, s] : msg.raw) symbols.insert(symbols.end(), s.begin(), s.end());
        }
        RsCodec codec(field, symbols.size(), rho);
        EdgeChannel channel(field, rho, edge_seed++);
        std::vector<u64> received = channel.transmit(codec.encode(symbols));
        std::vector<u64> recovered;
        try {
            recovered = codec.decode(received);
        } catch (const DecodeFailure&) {
            decode_ok = false;
            recovered = symbols;  // keep the simulation going; report stays unverified
        }
        std::size_t cursor = 0;
        if (msg.aggregated) {
            msg.agg = recovered;
        } else {
            for (auto& [h, s] : msg.raw) {
                std::copy(recovered.begin() + cursor, recovered.begin() + cursor + s.size(), s.begin());
                cursor += s.size();
            }
        }
        report.per_edge.push_back({v, tree.parent.at(v), (long long)codec.block_len()});
        report.total_symbols += (long long)codec.block_len();
        outbox[v] = std::move(msg);
    }

    std::vector<u64> xi(l, 0);
    for (int c : tree.children.at(fail)) {
        xi = vec::add(field, xi, detail::lift_message(code, fail, tree.helpers, outbox.at(c), l));
    }
    RepairOutcome out;
    out.content = code.finalize(fail, xi);
    report.verified = decode_ok && (out.content == code.node_content(fail));
    out.report = std::move(report);
    return out;
}

}  // namespace grc
