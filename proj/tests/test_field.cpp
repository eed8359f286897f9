#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "grc/field.hpp"
#include "grc/poly.hpp"

using namespace grc;

TEST_CASE("inverses") {
    PrimeField f7(7);
    CHECK(f7.inv(3) == 5);
    CHECK(f7.inv(1) == 1);
    PrimeField f(65537);
    CHECK(f.inv(2) == 32769);
    CHECK(f.mul(2, 32769) == 1);
    CHECK_THROWS_AS(f.inv(0), std::domain_error);
}

TEST_CASE("powers") {
    PrimeField f7(7);
    CHECK(f7.pow(3, 2) == 2);
    CHECK(f7.pow(5, 0) == 1);
    CHECK(f7.pow(0, 0) == 1);
    CHECK(f7.pow(3, 6) == 1);  // order divides p-1
}

TEST_CASE("modulus validation") {
    CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(65536), std::invalid_argument);
    CHECK_NOTHROW(PrimeField(2));
    CHECK_NOTHROW(PrimeField(65537));
}

TEST_CASE("field axioms, exhaustive for small p") {
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        PrimeField f(p);
        for (u64 a = 0; a < p; ++a) {
            for (u64 b = 0; b < p; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                CHECK(f.add(a, f.neg(a)) == 0);
                if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
                for (u64 c = 0; c < p; ++c) {
                    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                    CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                }
            }
        }
    }
}

TEST_CASE("inv is an involution") {
    PrimeField f(65537);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        u64 a = rng() % (f.modulus() - 1) + 1;
        CHECK(f.inv(f.inv(a)) == a);
    }
}

TEST_CASE("polynomial helpers") {
    PrimeField f(65537);
    std::vector<u64> a{1, 2, 3};  // 1 + 2x + 3x^2
    CHECK(poly::eval(f, a, 0) == 1);
    CHECK(poly::eval(f, a, 1) == 6);
    CHECK(poly::eval(f, a, 2) == 17);

    auto prod = poly::mul(f, {1, 1}, {f.neg(1), 1});  // (x+1)(x-1) = x^2-1
    CHECK(prod == std::vector<u64>{f.neg(1), 0, 1});

    auto [q, r] = poly::divmod(f, prod, {1, 1});
    CHECK(poly::trim(r).empty());
    CHECK(q == std::vector<u64>{f.neg(1), 1});

    std::mt19937_64 rng(11);
    std::vector<u64> coeffs(5);
    for (auto& c : coeffs) c = rng() % f.modulus();
    std::vector<u64> xs{1, 2, 3, 4, 5}, ys;
    for (u64 x : xs) ys.push_back(poly::eval(f, coeffs, x));
    CHECK(poly::interpolate(f, xs, ys) == coeffs);
}
