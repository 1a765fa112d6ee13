#include <doctest.h>

#include "extforge/bgpoly.hpp"

using namespace extforge;

TEST_CASE("small Brown-Gitler polynomials") {
    CHECK(bg_f(0).to_string() == "1");
    CHECK(bg_f(1).to_string() == "x");
    CHECK(bg_f(2).to_string() == "t x + s t^2");
    CHECK(bg_f(3).to_string() == "t x^2");
    CHECK(bg_f(5) == BGPolynomial::monomial(0, 3, 2) + BGPolynomial::monomial(1, 4, 1));
    CHECK(bg_f(6) == BGPolynomial::monomial(0, 4, 2) + BGPolynomial::monomial(1, 5, 1) + BGPolynomial::monomial(2, 6, 0));
    CHECK(bg_f_multi({1, 1}).to_string() == "x^2");
    CHECK(bg_f_multi({2, 1}).to_string() == "t x^2 + s t^2 x");
    CHECK_THROWS(bg_f(-1));
    CHECK_THROWS(bg_f_multi({0}));
}

TEST_CASE("multi-index polynomials multiply") {
    for (int a = 1; a <= 12; ++a)
        for (int b = 1; b <= 12; ++b) {
            CHECK(bg_f_multi({a, b}) == bg_f(a) * bg_f(b));
            CHECK(bg_f_multi({a, b}) == bg_f_multi({b, a}));
        }
}

TEST_CASE("lemma holds") {
    for (int i = 0; i <= 256; ++i) {
        auto r = check_lemma(i);
        CHECK_MESSAGE(r.ok(), "i = " << i);
    }
    // rank grows like the binary expansion: f_i(1,1,1) is a Fibonacci-type count
    CHECK(bg_f(7).max_power(0) == 0);
    CHECK(bg_f(6).max_power(0) == 2);
}

TEST_CASE("summand descriptors") {
    E1Window w{0, 200, 0, 40};
    auto one = enumerate_summands({1}, w);
    REQUIRE(one.kept.size() == 1);
    CHECK(one.kept[0].suspension == 0);
    CHECK(one.kept[0].e1_suspension == 8);
    CHECK(one.kept[0].tensor_power == 1);
    CHECK(one.a1_terms.empty());

    auto two = enumerate_summands({2}, w);
    REQUIRE(two.kept.size() == 2);
    CHECK(two.kept[0].suspension == 8);
    CHECK(two.kept[0].tensor_power == 1);
    CHECK(two.kept[1].suspension == 17);
    CHECK(two.kept[1].shift == 1);
    CHECK(two.kept[1].e1_suspension == 33);
    CHECK(two.kept[1].bottom_stem == 32);
    CHECK(two.kept[1].bottom_s == 1);
    REQUIRE(two.a1_terms.size() == 1);
    CHECK(two.a1_terms[0].tmf_index == 0);

    // conservation: nothing disappears, it is either kept or cut
    for (int i = 1; i <= 40; ++i) {
        auto l = enumerate_summands({i}, {0, 100, 0, 6});
        CHECK(l.total() == bg_f(i).value_at_one());
    }
    auto far = enumerate_summands({9}, {0, 40, 0, 10});
    CHECK(far.kept.empty());
    CHECK(far.total() == bg_f(9).value_at_one());
}

TEST_CASE("A(1) vanishing filter") {
    CHECK(a1_vanishing_filter(112, 26));
    CHECK(!a1_vanishing_filter(0, 7));
    CHECK(!a1_vanishing_filter(7, 8));
    CHECK(a1_vanishing_filter(0, 8));
    for (int stem = 0; stem < 150; ++stem)
        for (int s = 0; s < 40; ++s) {
            if (a1_vanishing_filter(stem, s)) {
                CHECK(a1_vanishing_filter(stem, s + 1));
                if (stem > 0) CHECK(a1_vanishing_filter(stem - 1, s));
            }
        }
}

TEST_CASE("E1 windows") {
    auto e = e1_window(1, {96, 144, 20, 30});
    REQUIRE(e.size() == 17);
    CHECK(e.front().I == std::vector<int>{1});
    CHECK(e.back().I == std::vector<int>{17});
    auto e2 = e1_window(2, {0, 40, 0, 10});
    // compositions of weight <= 4 into two parts
    CHECK(e2.size() == 6);
    CHECK(e1_window(3, {0, 16, 0, 10}).empty());
    // residues low in filtration are flagged, high ones dropped
    auto lo = e1_window(1, {0, 40, 0, 4});
    bool flagged = false;
    for (const auto& x : lo)
        for (const auto& a : x.audit) flagged |= a.rfind("requires", 0) == 0;
    CHECK(flagged);
    auto hi = e1_window(1, {96, 144, 30, 40});
    for (const auto& x : hi)
        for (const auto& a : x.audit) CHECK(a.rfind("dropped", 0) == 0);
    auto j = to_json(hi);
    CHECK(j.size() == 17);
    CHECK(j[1]["I"][0] == 2);
    CHECK(differential_target(120, 26, 1, 1) == std::pair<int, int>{112, 26});
    CHECK(differential_target(120, 26, 3, 3) == std::pair<int, int>{98, 24});
}
