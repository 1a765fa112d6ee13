#include <doctest.h>

#include <set>

#include "extforge/oracle.hpp"
#include "extforge/resolve.hpp"

using namespace extforge;
using namespace extforge::oracle;

namespace {

// (1 (x) psi) psi == (psi (x) 1) psi on every monomial
bool coassociative(const DualAlgebra& G) {
    for (std::size_t i = 0; i < G.size(); ++i) {
        std::map<std::tuple<std::size_t, std::size_t, std::size_t>, bool> l, r;
        for (auto [a, b] : G.coproduct(i)) {
            for (auto [c, d] : G.coproduct(b)) l[{a, c, d}] = !l[{a, c, d}];
            for (auto [c, d] : G.coproduct(a)) r[{c, d, b}] = !r[{c, d, b}];
        }
        std::set<std::tuple<std::size_t, std::size_t, std::size_t>> ls, rs;
        for (auto& [k, v] : l)
            if (v) ls.insert(k);
        for (auto& [k, v] : r)
            if (v) rs.insert(k);
        if (ls != rs) return false;
    }
    return true;
}

MilnorElement expand(const SqWord& w) {
    MilnorElement m = MilnorElement::unit();
    for (int a : w) m = milnor_product(m, MilnorElement::sq({a}));
    return m;
}

}  // namespace

TEST_CASE("dual algebras") {
    DualAlgebra a1(dual_bounds(1)), a2(dual_bounds(2));
    CHECK(a1.size() == 8);
    CHECK(a2.size() == 64);
    CHECK(a1.top_degree() == 6);
    CHECK(a2.top_degree() == 23);
    CHECK(coassociative(a1));
    CHECK(coassociative(a2));
    // counit on both sides
    for (std::size_t i = 0; i < a2.size(); ++i) {
        int left = 0, right = 0;
        for (auto [a, b] : a2.coproduct(i)) {
            if (a == a2.unit() && b == i) ++left;
            if (b == a2.unit() && a == i) ++right;
        }
        CHECK(left == 1);
        CHECK(right == 1);
    }
    // xi_2 -> xi_2 (x) 1 + xi_1^2 (x) xi_1 + 1 (x) xi_2
    auto x2 = static_cast<std::size_t>(a2.index({0, 1}));
    auto x1 = static_cast<std::size_t>(a2.index({1}));
    auto x1sq = static_cast<std::size_t>(a2.index({2}));
    CHECK(a2.coproduct(x2).size() == 3);
    CHECK(std::count(a2.coproduct(x2).begin(), a2.coproduct(x2).end(), std::make_pair(x1sq, x1)) == 1);
    CHECK(a2.index({8}) == -1);
    CHECK(a2.index({4}) >= 0);
    CHECK(a2.index({0, 0, 2}) == -1);
}

TEST_CASE("cotor of the trivial comodule") {
    auto c = cotor(dual_bounds(2), trivial_comodule(), 4, 12);
    CHECK(c.dim(0, 0) == 1);
    std::set<int> one;
    for (int t = 1; t <= 13; ++t)
        if (c.dim(1, t)) one.insert(t);
    CHECK(one == std::set<int>{1, 2, 4});
    CHECK(c.dim(2, 2) == 1);
    CHECK(c.dim(3, 3) == 1);
    CHECK(c.dim(3, 11) == 1);  // c0
    CHECK_THROWS_AS(cotor(dual_bounds(2), trivial_comodule(), 20, 60), BudgetExceeded);
    CHECK_THROWS(c.dim(9, 9));
}

TEST_CASE("literal cobar complex") {
    CobarComplex cb(dual_bounds(1), trivial_comodule());
    auto c = cotor(dual_bounds(1), trivial_comodule(), 3, 7);
    for (int s = 0; s <= 3; ++s)
        for (int t = s; t <= s + 7; ++t) {
            CHECK(cb.check_d_squared(s, t));
            CHECK(cb.cohomology(s, t) == c.dim(s, t));
        }
    auto b = comodule_of(bo(1, Profile::A(1)));
    CobarComplex cbo(dual_bounds(1), b);
    auto cc = cotor(dual_bounds(1), b, 2, 8);
    for (int s = 0; s <= 2; ++s)
        for (int t = s; t <= s + 8; ++t) {
            CHECK(cbo.check_d_squared(s, t));
            CHECK(cbo.cohomology(s, t) == cc.dim(s, t));
        }
    CobarComplex big(dual_bounds(2), trivial_comodule(), 1000);
    CHECK_THROWS_AS(big.dim(6, 18), BudgetExceeded);
}

TEST_CASE("cotor agrees with the resolution engine") {
    for (int n : {1, 2}) {
        Profile p = Profile::A(n);
        auto P = minimal_resolution(p, 7, 19);
        ChartOptions o;
        o.window = {0, 6, 0, 18};
        for (const auto& M : {trivial(p), bo(1, p)}) {
            auto chart = ext_module(*P, M, o);
            auto c = cotor(dual_bounds(n), comodule_of(M), 6, 12);
            for (int s = 0; s <= 6; ++s)
                for (int t = s; t <= s + 12; ++t) CHECK(chart.dim(s, t) == c.dim(s, t));
        }
    }
}

TEST_CASE("adem relations") {
    CHECK(adem_straighten({1, 1}).empty());
    CHECK(adem_straighten({2, 2}) == std::vector<SqWord>{{3, 1}});
    CHECK(adem_straighten({1, 2}) == std::vector<SqWord>{{3}});
    CHECK(adem_straighten({0, 2, 0}) == std::vector<SqWord>{{2}});
    CHECK(adem_straighten({}) == std::vector<SqWord>{{}});
    CHECK(is_admissible({4, 2, 1}));
    CHECK(!is_admissible({2, 2}));
    // one admissible monomial per Milnor basis element
    for (int d = 0; d <= 24; ++d) CHECK(admissible_basis(d).size() == basis_in_degree(Profile::full(), d).size());
}

TEST_CASE("adem straightening matches the Milnor product") {
    std::size_t words = 0;
    for (int a = 1; a <= 16; ++a)
        for (int b = 0; a + b <= 16; ++b)
            for (int c = 0; a + b + c <= 16; ++c) {
                if (b == 0 && c > 0) continue;
                SqWord w{a};
                if (b) w.push_back(b);
                if (c) w.push_back(c);
                MilnorElement lhs = expand(w), rhs;
                for (const auto& x : adem_straighten(w)) {
                    CHECK(is_admissible(x));
                    rhs += expand(x);
                }
                CHECK(lhs == rhs);
                ++words;
            }
    CHECK(words > 500);
}
