#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "grc/matrix.hpp"

using namespace grc;

namespace {

Matrix random_matrix(const PrimeField& f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rng() % f.modulus();
    return m;
}

Matrix random_nonsingular(const PrimeField& f, std::size_t n, std::mt19937_64& rng) {
    while (true) {
        Matrix m = random_matrix(f, n, n, rng);
        if (m.rank() == n) return m;
    }
}

}  // namespace

TEST_CASE("product") {
    PrimeField f7(7);
    Matrix a(f7, 2, 2, {1, 2, 3, 4});
    CHECK(Matrix::identity(f7, 2) * a == a);
    CHECK(a * Matrix::identity(f7, 2) == a);
    Matrix v(f7, 2, 1, {2, 5});
    CHECK(a * v == Matrix(f7, 2, 1, {5, 5}));
    CHECK_THROWS_AS(a * Matrix(f7, 3, 1), std::invalid_argument);
}

TEST_CASE("inverse") {
    PrimeField f7(7);
    CHECK(Matrix::identity(f7, 4).inverse() == Matrix::identity(f7, 4));
    Matrix d(f7, 2, 2, {2, 0, 0, 4});
    CHECK(d.inverse() == Matrix(f7, 2, 2, {4, 0, 0, 2}));

    PrimeField f(65537);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        Matrix m = random_nonsingular(f, 6, rng);
        CHECK(m * m.inverse() == Matrix::identity(f, 6));
    }
    Matrix sing(f, 2, 2, {1, 2, 2, 4});
    CHECK_THROWS_AS(sing.inverse(), std::domain_error);
}

TEST_CASE("rank") {
    PrimeField f(65537);
    CHECK(Matrix(f, 3, 4).rank() == 0);
    CHECK(Matrix::identity(f, 5).rank() == 5);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        Matrix m = random_matrix(f, 4 + rng() % 4, 4 + rng() % 4, rng);
        CHECK(m.rank() == m.transpose().rank());
    }
}

TEST_CASE("nullspace") {
    PrimeField f(65537);
    CHECK(Matrix::identity(f, 4).nullspace().cols() == 0);
    Matrix z(f, 2, 3);
    Matrix nz = z.nullspace();
    CHECK(nz.cols() == 3);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        Matrix m = random_matrix(f, 3 + rng() % 3, 5 + rng() % 4, rng);
        Matrix ns = m.nullspace();
        CHECK(ns.cols() == m.cols() - m.rank());
        CHECK((m * ns).is_zero());
    }
}

TEST_CASE("vandermonde") {
    PrimeField f7(7);
    CHECK(Matrix::vandermonde(f7, {1}, 3) == Matrix(f7, 1, 3, {1, 1, 1}));
    CHECK(Matrix::vandermonde(f7, {2, 3}, 2) == Matrix(f7, 2, 2, {1, 2, 1, 3}));
    CHECK_THROWS_AS(Matrix::vandermonde(f7, {2, 2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(Matrix::vandermonde(f7, {0, 2}, 2), std::invalid_argument);

    PrimeField f(65537);
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
        std::size_t d = 2 + rng() % 6;
        std::set<u64> pts;
        while (pts.size() < d) pts.insert(rng() % (f.modulus() - 1) + 1);
        Matrix v = Matrix::vandermonde(f, std::vector<u64>(pts.begin(), pts.end()), d);
        CHECK_NOTHROW(v.inverse());
    }
}

TEST_CASE("rank factorization") {
    PrimeField f(65537);
    auto [ci, ri] = Matrix::identity(f, 4).rank_factorize();
    CHECK(ci * ri == Matrix::identity(f, 4));
    CHECK(ci.cols() == 4);

    std::mt19937_64 rng(17);
    Matrix u = random_matrix(f, 5, 1, rng);
    Matrix v = random_matrix(f, 1, 6, rng);
    Matrix outer = u * v;
    auto [c1, r1] = outer.rank_factorize();
    CHECK(c1.cols() == 1);
    CHECK(c1 * r1 == outer);

    for (int t = 0; t < 50; ++t) {
        Matrix m = random_matrix(f, 2 + rng() % 5, 2 + rng() % 5, rng);
        auto [c, r] = m.rank_factorize();
        CHECK(c.cols() == m.rank());
        CHECK(c * r == m);
    }
}

TEST_CASE("associativity on random conformable triples") {
    PrimeField f(65537);
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        std::size_t a = 1 + rng() % 5, b = 1 + rng() % 5, c = 1 + rng() % 5, d = 1 + rng() % 5;
        Matrix x = random_matrix(f, a, b, rng), y = random_matrix(f, b, c, rng), z = random_matrix(f, c, d, rng);
        CHECK((x * y) * z == x * (y * z));
    }
}

TEST_CASE("solve") {
    PrimeField f(65537);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        Matrix a = random_matrix(f, 4, 6, rng);
        Matrix x(f, 6, 2);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 2; ++j) x.at(i, j) = rng() % f.modulus();
        Matrix b = a * x;
        Matrix sol = a.solve(b);
        CHECK(a * sol == b);
    }
    Matrix a(f, 2, 1, {1, 0});
    CHECK_THROWS_AS(a.solve(std::vector<u64>{0, 1}), std::domain_error);
}
