#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "grc/channel.hpp"
#include "grc/code_pm.hpp"

using namespace grc;

namespace {

RepairTree bench_repair_tree() {
    Graph g(7, {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}});
    return build_repair_tree(g, 0, select_helpers(g, 0, 6));
}

std::size_t distance(const std::vector<u64>& a, const std::vector<u64>& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

}  // namespace

TEST_CASE("block length") {
    CHECK(RsCodec::block_length(5, Rational(0)) == 5);
    CHECK(RsCodec::block_length(22, Rational(1, 10)) == 28);
    CHECK(RsCodec::block_length(1, Rational(1, 10)) == 3);
    CHECK(RsCodec::block_length(3, Rational(1, 10)) == 5);
    CHECK_THROWS_AS(RsCodec::block_length(4, Rational(1, 2)), std::invalid_argument);
}

TEST_CASE("encode basics") {
    PrimeField f(65537);
    RsCodec codec(f, 4, Rational(1, 10));
    CHECK(codec.encode(std::vector<u64>(4, 0)) == std::vector<u64>(codec.block_len(), 0));

    RsCodec identity(f, 4, Rational(0));
    CHECK(identity.block_len() == 4);
    std::vector<u64> msg{3, 1, 4, 1};
    CHECK(identity.decode(identity.encode(msg)) == msg);
}

TEST_CASE("error-free and single-error round trips") {
    PrimeField f(65537);
    std::mt19937_64 rng(163);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t k = 1 + rng() % 8;
        RsCodec codec(f, k, Rational(1, 10));
        std::vector<u64> msg(k);
        for (auto& v : msg) v = rng() % f.modulus();
        auto block = codec.encode(msg);
        CHECK(codec.decode(block) == msg);
        if (codec.radius() >= 1) {
            auto corrupted = block;
            std::size_t pos = rng() % corrupted.size();
            corrupted[pos] = f.add(corrupted[pos], 1 + rng() % (f.modulus() - 1));
            CHECK(codec.decode(corrupted) == msg);
        }
    }
}

TEST_CASE("exhaustive error placements up to the radius") {
    PrimeField f(65537);
    std::mt19937_64 rng(167);
    for (auto [k, rho] : std::vector<std::pair<std::size_t, Rational>>{{2, Rational(1, 3)}, {4, Rational(3, 10)}}) {
        RsCodec codec(f, k, rho);
        REQUIRE(codec.block_len() <= 12);
        std::vector<u64> msg(k);
        for (auto& v : msg) v = rng() % f.modulus();
        auto block = codec.encode(msg);
        std::size_t n = codec.block_len(), e = codec.radius();

        // every subset of at most e positions, a few deltas each
        std::vector<std::size_t> subset;
        auto rec = [&](auto&& self, std::size_t start) -> void {
            if (!subset.empty()) {
                for (int rep = 0; rep < 3; ++rep) {
                    auto corrupted = block;
                    for (std::size_t pos : subset) {
                        corrupted[pos] = f.add(corrupted[pos], 1 + rng() % (f.modulus() - 1));
                    }
                    CHECK(codec.decode(corrupted) == msg);
                }
            }
            if (subset.size() == e) return;
            for (std::size_t i = start; i < n; ++i) {
                subset.push_back(i);
                self(self, i + 1);
                subset.pop_back();
            }
        };
        rec(rec, 0);
    }
}

TEST_CASE("beyond the radius the decoder never mis-returns silently") {
    PrimeField f(65537);
    std::mt19937_64 rng(173);
    RsCodec codec(f, 4, Rational(3, 10));
    std::size_t e = codec.radius();
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<u64> msg(4);
        for (auto& v : msg) v = rng() % f.modulus();
        auto block = codec.encode(msg);
        auto corrupted = block;
        std::set<std::size_t> positions;
        while (positions.size() < e + 1) positions.insert(rng() % corrupted.size());
        for (auto pos : positions) corrupted[pos] = f.add(corrupted[pos], 1 + rng() % (f.modulus() - 1));
        try {
            auto out = codec.decode(corrupted);
            // acceptable only if some codeword within the radius explains
            // the received block
            CHECK(distance(codec.encode(out), corrupted) <= e);
        } catch (const DecodeFailure&) {
            SUCCEED("explicit failure");
        }
    }
}

TEST_CASE("encoding distributes over contributions") {
    PrimeField f(65537);
    PmMsrCode code(f, 7, 4, PmMsrCode::random_file(f, 4, 179));
    std::vector<int> helpers{1, 2, 3, 4, 5, 6};
    RsCodec codec(f, 3, Rational(1, 10));
    std::vector<int> part{1, 2, 3};
    auto xi_full = ip_aggregate(code, 0, helpers, part);
    for (int h : part) {
        std::vector<int> rest;
        for (int x : part)
            if (x != h) rest.push_back(x);
        std::vector<u64> own = code.lift_matrix(0, helpers, h) * code.helper_share(0, h);
        auto lhs = codec.encode(xi_full);
        auto rhs = vec::add(f, codec.encode(own), codec.encode(ip_aggregate(code, 0, helpers, rest)));
        CHECK(lhs == rhs);
    }
    // a node can correct and then add its encoded contribution directly
    std::vector<u64> own = code.lift_matrix(0, helpers, 1) * code.helper_share(0, 1);
    auto rest_cw = codec.encode(ip_aggregate(code, 0, helpers, {2, 3}));
    EdgeChannel channel(f, Rational(1, 10), 42);
    auto corrected = codec.nearest_codeword(channel.transmit(rest_cw));
    CHECK(corrected == rest_cw);
    CHECK(vec::add(f, corrected, codec.encode(own)) == codec.encode(xi_full));
}

TEST_CASE("channel corruption stays within budget") {
    PrimeField f(65537);
    Rational rho(1, 10);
    std::mt19937_64 rng(181);
    for (int trial = 0; trial < 50; ++trial) {
        EdgeChannel channel(f, rho, rng());
        std::size_t n = 5 + rng() % 25;
        std::vector<u64> block(n);
        for (auto& v : block) v = rng() % f.modulus();
        auto received = channel.transmit(block);
        CHECK(distance(block, received) <= (std::size_t)(n / 10));
    }
}

TEST_CASE("resilient repair with adversarial edges") {
    PrimeField f(65537);
    RepairTree tree = bench_repair_tree();
    std::mt19937_64 rng(191);
    for (u64 seed = 1; seed <= 50; ++seed) {
        PmMsrCode code(f, 7, 4, PmMsrCode::random_file(f, 4, rng()));
        auto outcome = simulate_resilient_repair(code, tree, Rational(1, 10), seed);
        CHECK(outcome.report.verified);
        CHECK(outcome.content == code.node_content(0));
        // leaf edges carry blocks for one symbol, inner edges for three
        CHECK(outcome.report.total_symbols == 4 * 3 + 2 * 5);
    }
}

TEST_CASE("zero-noise resilient repair matches plain ip accounting") {
    PrimeField f(65537);
    RepairTree tree = bench_repair_tree();
    PmMsrCode code(f, 7, 4, PmMsrCode::random_file(f, 4, 193));
    auto noisy = simulate_resilient_repair(code, tree, Rational(0), 7);
    auto plain = simulate_repair(code, tree, Strategy::ip);
    CHECK(noisy.report.total_symbols == plain.report.total_symbols);
    CHECK(noisy.report.verified);
    CHECK(noisy.content == plain.content);
}

TEST_CASE("measured overhead stays within the rate bound plus rounding") {
    PrimeField f(65537);
    RepairTree tree = bench_repair_tree();
    Rational rho(1, 10);
    PmMsrCode code(f, 7, 4, PmMsrCode::random_file(f, 4, 197));
    auto noisy = simulate_resilient_repair(code, tree, rho, 11);
    auto plain = simulate_repair(code, tree, Strategy::ip);
    long long den = rho.den, num = rho.num;
    auto ceil_rate = [&](long long x) { return (x * den + (den - 2 * num) - 1) / (den - 2 * num); };
    long long bound = 0;
    for (auto& e : plain.report.per_edge) bound += ceil_rate(e.symbols) + ceil_rate(1);
    CHECK(noisy.report.total_symbols <= bound);
}
