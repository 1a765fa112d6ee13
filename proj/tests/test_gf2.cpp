#include <doctest.h>

#include <random>

#include "extforge/gf2.hpp"

using namespace extforge;

namespace {

BitMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double density = 0.5) {
    std::bernoulli_distribution bit(density);
    BitMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (bit(rng)) m.set(i, j);
    return m;
}

BitMatrix naive_multiply(const BitMatrix& a, const BitMatrix& b) {
    BitMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            bool s = false;
            for (std::size_t k = 0; k < a.cols(); ++k) s ^= a.get(i, k) && b.get(k, j);
            c.set(i, j, s);
        }
    return c;
}

}  // namespace

TEST_CASE("rref small cases") {
    auto id = rref(BitMatrix::identity(3));
    CHECK(id.rank == 3);
    CHECK(id.pivot_columns == std::vector<std::size_t>{0, 1, 2});

    auto ones = rref(BitMatrix::from_strings({"11"}));
    CHECK(ones.rank == 1);
    CHECK(ones.pivot_columns == std::vector<std::size_t>{0});

    auto zero = rref(BitMatrix(2, 2));
    CHECK(zero.rank == 0);
    CHECK(zero.pivot_columns.empty());
}

TEST_CASE("kernel basis small cases") {
    auto k = kernel_basis(BitMatrix::from_strings({"11"}));
    REQUIRE(k.size() == 1);
    CHECK(k[0].to_string() == "11");
    CHECK(kernel_basis(BitMatrix::identity(2)).empty());
    auto z = kernel_basis(BitMatrix(1, 3));
    REQUIRE(z.size() == 3);
    CHECK(z[0].to_string() == "100");
    CHECK(z[1].to_string() == "010");
    CHECK(z[2].to_string() == "001");
}

TEST_CASE("solve small cases") {
    auto m = BitMatrix::from_strings({"10", "11"});
    BitVec b(2);
    b.set(0);
    auto x = solve(m, b);
    REQUIRE(x);
    CHECK(x->to_string() == "11");

    BitVec one(1);
    one.set(0);
    CHECK_FALSE(solve(BitMatrix::from_strings({"00"}), one));

    BitVec c(4);
    c.set(1);
    c.set(3);
    auto y = solve(BitMatrix::identity(4), c);
    REQUIRE(y);
    CHECK(*y == c);
}

TEST_CASE("multiply small cases") {
    std::mt19937_64 rng(7);
    auto m = random_matrix(rng, 5, 9);
    CHECK(multiply(BitMatrix::identity(5), m) == m);
    auto p = multiply(BitMatrix::from_strings({"11"}), BitMatrix::from_strings({"1", "1"}));
    CHECK(p.rows() == 1);
    CHECK_FALSE(p.get(0, 0));
    // (0 1 2) -> (1 2 0) composed with itself
    auto s = BitMatrix::from_strings({"010", "001", "100"});
    CHECK(multiply(s, s) == BitMatrix::from_strings({"001", "100", "010"}));
    CHECK_THROWS(multiply(BitMatrix(2, 3), BitMatrix(2, 3)));
}

TEST_CASE("rank-nullity, idempotence and solve on random matrices") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t r = 1 + rng() % 40, c = 1 + rng() % 140;
        auto m = random_matrix(rng, r, c, (trial % 3 + 1) / 4.0);
        auto e = rref(m);
        auto k = kernel_basis(m);
        CHECK(e.rank + k.size() == c);
        CHECK(rank(m) == e.rank);
        CHECK(rref(e.matrix).matrix == e.matrix);
        for (std::size_t i = 1; i < e.pivot_columns.size(); ++i) CHECK(e.pivot_columns[i - 1] < e.pivot_columns[i]);
        for (const auto& v : k) CHECK(apply(m, v).none());

        BitVec x(c);
        for (std::size_t j = 0; j < c; ++j)
            if (rng() & 1) x.set(j);
        BitVec b = apply(m, x);
        auto sol = solve(m, b);
        REQUIRE(sol);
        CHECK(apply(m, *sol) == b);
    }
}

TEST_CASE("packed multiply matches the triple loop on 64x64") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_matrix(rng, 64, 64), b = random_matrix(rng, 64, 64);
        CHECK(multiply(a, b) == naive_multiply(a, b));
    }
    auto a = random_matrix(rng, 17, 130), b = random_matrix(rng, 130, 70);
    CHECK(multiply(a, b) == naive_multiply(a, b));
}

TEST_CASE("padding bits stay clear") {
    std::mt19937_64 rng(5);
    auto m = random_matrix(rng, 9, 70);
    auto e = rref(m).matrix;
    for (std::size_t r = 0; r < e.rows(); ++r) CHECK((e.row_data(r)[1] >> 6) == 0);
    CHECK(m.transpose().transpose() == m);
}

TEST_CASE("echelon tracks preimages") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng() % 90, k = rng() % 60;
        Echelon e(n, k + 1);
        std::vector<BitVec> ins;
        for (std::size_t i = 0; i < k; ++i) {
            BitVec v(n);
            for (std::size_t j = 0; j < n; ++j)
                if (rng() % 5 == 0) v.set(j);
            e.add(v);
            ins.push_back(v);
        }
        BitMatrix cols = BitMatrix::from_columns(ins, n);
        CHECK(e.rank() == rank(cols));
        BitVec c(k);
        for (std::size_t j = 0; j < k; ++j)
            if (rng() & 1) c.set(j);
        BitVec target = k ? apply(cols, c) : BitVec(n);
        auto ex = e.express(target);
        REQUIRE(ex);
        BitVec back(n);
        for (std::size_t j : ex->ones()) back ^= ins[j];
        CHECK(back == target);
    }
}
