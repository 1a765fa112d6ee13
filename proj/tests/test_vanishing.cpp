#include <doctest.h>

#include "extforge/vanishing.hpp"

using namespace extforge;

TEST_CASE("sources and their shifts") {
    auto v = vanishing_sources();
    REQUIRE(v.size() == 4);
    CHECK(v[3].stem == 136);
    CHECK(v[3].s == 28);
    auto w = vanishing_sources(1);
    CHECK(w[0].stem == 72);
    CHECK(w[0].s == 18);
}

TEST_CASE("reduced vanishing window") {
    VanishingOptions o;
    o.fallback = true;
    auto r = vanishing_windows(o);
    CHECK(r.ok());
    CHECK(r.other_ok());
    CHECK(r.source_dims[0] > 0);
    std::size_t nonzero = 0, skipped = 0;
    for (const auto& c : r.edge) {
        nonzero += c.in_range && c.dim;
        skipped += !c.in_range;
    }
    CHECK(nonzero == 1);
    CHECK(skipped == 2);
    CHECK(r.to_json()["ok"] == true);
}

TEST_CASE("full vanishing window") {
    auto r = vanishing_windows();
    CHECK(r.ok());
    CHECK(r.other_ok());
    for (auto d : r.source_dims) CHECK(d > 0);
    REQUIRE(r.edge.size() == 12);
    for (const auto& c : r.edge) {
        CHECK(c.in_range);
        if (c.source == "kappa[18]" && c.I.size() == 1) {
            CHECK(c.stem == 120);
            CHECK(c.dim == 1);
        } else {
            CHECK(c.dim == 0);
        }
    }
    CHECK(r.edge[0].stem == 112);
    CHECK(r.edge[0].s == 26);
    CHECK(r.a1_flagged == 0);
    CHECK(!r.beyond.empty());
}
