#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "extforge/hopf.hpp"

using namespace extforge;

namespace {

std::vector<Exponents> all_basis(const Profile& p) {
    std::vector<Exponents> out;
    for (int n = 0; n <= p.top_degree(); ++n)
        for (auto& r : basis_in_degree(p, n)) out.push_back(r);
    return out;
}

using Triple = std::tuple<Exponents, Exponents, Exponents>;

std::map<Triple, int> triples_left(const Exponents& r) {
    std::map<Triple, int> acc;
    for (auto& [a, b] : coproduct(r))
        for (auto& [a1, a2] : coproduct(a)) acc[{a1, a2, b}] ^= 1;
    return acc;
}

std::map<Triple, int> triples_right(const Exponents& r) {
    std::map<Triple, int> acc;
    for (auto& [a, b] : coproduct(r))
        for (auto& [b1, b2] : coproduct(b)) acc[{a, b1, b2}] ^= 1;
    return acc;
}

std::set<std::pair<Exponents, Exponents>> reduce_pairs(const std::vector<std::pair<Exponents, Exponents>>& v) {
    std::map<std::pair<Exponents, Exponents>, int> acc;
    for (auto& p : v) acc[p] ^= 1;
    std::set<std::pair<Exponents, Exponents>> out;
    for (auto& [k, c] : acc)
        if (c) out.insert(k);
    return out;
}

}  // namespace

TEST_CASE("degree bases") {
    CHECK(basis_in_degree(Profile::A(1), 6) == std::vector<Exponents>{{3, 1}});
    for (auto p : {Profile::A(1), Profile::A(2), Profile::full()})
        CHECK(basis_in_degree(p, 0) == std::vector<Exponents>{{}});
    CHECK(all_basis(Profile::A(1)).size() == 8);
    CHECK(all_basis(Profile::A(2)).size() == 64);
    CHECK(all_basis(Profile::A(3)).size() == 1024);
    CHECK(Profile::A(2).top_degree() == 23);
    CHECK(Profile::A(3).dimension() == 1024);

    // (1+q+...+q^7)(1+q^3+q^6+q^9)(1+q^7)
    std::vector<int> series(24, 0);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 2; ++c) series[a + 3 * b + 7 * c]++;
    for (int n = 0; n < 24; ++n) CHECK(basis_in_degree(Profile::A(2), n).size() == static_cast<std::size_t>(series[n]));
    CHECK(basis_in_degree(Profile::A(2), 24).empty());

    // canonical order: length, then lexicographic
    auto b7 = basis_in_degree(Profile::full(), 7);
    CHECK(b7 == std::vector<Exponents>{{7}, {1, 2}, {4, 1}, {0, 0, 1}});
}

TEST_CASE("milnor products of small elements") {
    CHECK(milnor_product(Exponents{1}, Exponents{1}).is_zero());
    CHECK(milnor_product(Exponents{2}, Exponents{2}) == MilnorElement::sq({1, 1}));
    CHECK(milnor_product(Exponents{3}, Exponents{1}) == MilnorElement::sq({1, 1}));
    CHECK(milnor_product(Exponents{1}, Exponents{2}) == MilnorElement::sq({3}));
    CHECK(milnor_product(Exponents{2}, Exponents{1}) == MilnorElement({{3}, {0, 1}}));
    auto x = MilnorElement({{4, 1}, {0, 2}});
    CHECK(milnor_product(MilnorElement::unit(), x) == x);
    CHECK(milnor_product(x, MilnorElement::unit()) == x);
}

TEST_CASE("associativity") {
    auto a1 = all_basis(Profile::A(1));
    for (auto& a : a1)
        for (auto& b : a1)
            for (auto& c : a1) {
                MilnorElement A = MilnorElement::sq(a), B = MilnorElement::sq(b), C = MilnorElement::sq(c);
                CHECK(milnor_product(milnor_product(A, B), C) == milnor_product(A, milnor_product(B, C)));
            }
    auto a2 = all_basis(Profile::A(2));
    std::mt19937 rng(3);
    for (int trial = 0; trial < 400; ++trial) {
        MilnorElement A = MilnorElement::sq(a2[rng() % 64]), B = MilnorElement::sq(a2[rng() % 64]),
                      C = MilnorElement::sq(a2[rng() % 64]);
        CHECK(milnor_product(milnor_product(A, B), C) == milnor_product(A, milnor_product(B, C)));
    }
}

TEST_CASE("sub-Hopf algebras are closed under product") {
    Algebra alg(Profile::A(2));
    for (int a = 0; a <= 23; ++a)
        for (int b = 0; a + b <= 23; ++b)
            for (std::size_t i = 0; i < alg.dim(a); ++i)
                for (std::size_t j = 0; j < alg.dim(b); ++j) (void)alg.product(a, i, b, j);
    CHECK(alg.dim(23) == 1);
}

TEST_CASE("coproduct") {
    CHECK(coproduct({}) == std::vector<std::pair<Exponents, Exponents>>{{{}, {}}});
    for (auto& r : all_basis(Profile::A(2))) {
        for (auto& [a, b] : coproduct(r)) {
            CHECK(milnor_degree(a) + milnor_degree(b) == milnor_degree(r));
            CHECK(Profile::A(2).admits(a));
            CHECK(Profile::A(2).admits(b));
        }
        CHECK(triples_left(r) == triples_right(r));
    }
}

TEST_CASE("bialgebra compatibility on A(1)") {
    auto a1 = all_basis(Profile::A(1));
    for (auto& x : a1)
        for (auto& y : a1) {
            std::vector<std::pair<Exponents, Exponents>> lhs, rhs;
            for (auto& t : milnor_product(x, y).terms)
                for (auto& p : coproduct(t)) lhs.push_back(p);
            for (auto& [x1, x2] : coproduct(x))
                for (auto& [y1, y2] : coproduct(y))
                    for (auto& l : milnor_product(x1, y1).terms)
                        for (auto& r : milnor_product(x2, y2).terms) rhs.emplace_back(l, r);
            CHECK(reduce_pairs(lhs) == reduce_pairs(rhs));
        }
}

TEST_CASE("dual pairing") {
    CHECK(dual_pairing({1}, {1}));
    CHECK_FALSE(dual_pairing({1}, {0, 1}));
    auto a1 = all_basis(Profile::A(1));
    for (std::size_t i = 0; i < a1.size(); ++i) {
        int row = 0;
        for (std::size_t j = 0; j < a1.size(); ++j) row += dual_pairing(a1[i], a1[j]);
        CHECK(row == 1);
    }
}

TEST_CASE("indecomposables are the Sq(2^i)") {
    for (int n = 1; n <= 3; ++n) {
        Profile p = Profile::A(n);
        Algebra alg(p);
        for (int d = 1; d <= p.top_degree(); ++d) {
            Echelon dec(alg.dim(d));
            for (int a = 1; a < d; ++a)
                for (std::size_t i = 0; i < alg.dim(a); ++i)
                    for (std::size_t j = 0; j < alg.dim(d - a); ++j) {
                        BitVec v(alg.dim(d));
                        for (int k : alg.product(a, i, d - a, j)) v.flip(k);
                        dec.add(v);
                    }
            std::size_t indec = alg.dim(d) - dec.rank();
            bool power = (d & (d - 1)) == 0 && d <= (1 << n);
            CHECK_MESSAGE(indec == (power ? 1u : 0u), "A(" << n << ") degree " << d);
            if (power) CHECK_FALSE(dec.contains(BitVec::unit(alg.dim(d), alg.index_of({d}))));
        }
    }
}

TEST_CASE("conjugation is an anti-involution on A(2)") {
    Algebra alg(Profile::A(2));
    for (int a = 0; a <= 23; ++a)
        for (std::size_t i = 0; i < alg.dim(a); ++i) {
            BitVec back(alg.dim(a));
            for (std::size_t k : alg.conjugate(a, i).ones()) back ^= alg.conjugate(a, k);
            CHECK(back == BitVec::unit(alg.dim(a), i));
        }
    // chi(Sq(2)) = Sq(2), chi(Sq(0,1)) = Sq(0,1), chi(Sq(3)) = Sq(2,0)*Sq(1) = Sq(3) + Sq(0,1)
    CHECK(alg.to_element(2, alg.conjugate(2, alg.index_of({2}))) == MilnorElement::sq({2}));
    CHECK(alg.to_element(3, alg.conjugate(3, alg.index_of({0, 1}))) == MilnorElement::sq({0, 1}));
    CHECK(alg.to_element(3, alg.conjugate(3, alg.index_of({3}))) == MilnorElement({{3}, {0, 1}}));
}

TEST_CASE("full algebra is prepared lazily") {
    Algebra alg(Profile::full(), 10);
    CHECK(alg.dim(10) == basis_in_degree(Profile::full(), 10).size());
    CHECK_THROWS(alg.dim(11));
    alg.prepare(31);
    CHECK(alg.generators().size() == 5);
    CHECK(alg.dim(31) == basis_in_degree(Profile::full(), 31).size());
}
