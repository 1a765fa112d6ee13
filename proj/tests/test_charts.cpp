#include <doctest.h>

#include "extforge/charts.hpp"

using namespace extforge;

namespace {

struct Small {
    std::shared_ptr<FreeResolution> P = minimal_resolution(Profile::A(2), 10, 30);
    ExtChart f2, h8;
    Small() {
        ChartOptions o;
        o.window = {0, 10, 0, 30, std::nullopt, std::nullopt};
        f2 = ext_f2(*P, o);
        auto h = build_h8(*P, f2);
        h8 = ext_cell(h.complex, trivial(), o);
    }
};

const Small& small() {
    static Small s;
    return s;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("tsv") {
    ExtChart empty;
    CHECK(render_tsv(empty) == "stem\ts\tdim\tlabels\n");
    const auto& c = small().f2;
    auto tsv = render_tsv(c);
    CHECK(tsv.find("\n0\t0\t1\tx_{0,0}[0]\n") != std::string::npos);
    CHECK(count(tsv, "\n") == c.nonzero().size() + 1);
    // round trip, text and dims
    auto back = parse_tsv(tsv);
    CHECK(render_tsv(back) == tsv);
    for (auto [s, t] : c.nonzero()) CHECK(back.dim(s, t) == c.dim(s, t));
    CHECK_THROWS(parse_tsv("bad\n"));
    CHECK_THROWS(parse_tsv("stem\ts\tdim\tlabels\n1\t1\t2\tx_{1,1}\n"));
}

TEST_CASE("tsv keeps cells") {
    const auto& c = small().h8;
    auto tsv = render_tsv(c);
    CHECK(tsv.find("[1]") != std::string::npos);
    CHECK(render_tsv(parse_tsv(tsv)) == tsv);
}

TEST_CASE("svg") {
    const auto& c = small().f2;
    auto a = render_svg(c), b = render_svg(c);
    CHECK(a == b);
    CHECK(count(a, "class=\"bidegree\"") == c.nonzero().size());
    std::size_t classes = 0;
    for (auto [s, t] : c.nonzero()) classes += c.dim(s, t);
    CHECK(count(a, "<title>x_") == classes);
    // h0-tower on the 0-stem joins vertically
    CHECK(a.find("<g class=\"h0\"") != std::string::npos);
    ChartStyle no_lines;
    no_lines.h0 = no_lines.h1 = no_lines.h2 = false;
    CHECK(render_svg(c, no_lines).find("<g class=\"h0\"") == std::string::npos);

    ExtChart one;
    one.algebra = "A(2)";
    ExtGroup g;
    g.s = 1;
    g.t = 3;
    g.reps.assign(1, BitVec(0));
    one.groups[{1, 3}] = g;
    auto svg = render_svg(one);
    CHECK(count(svg, "class=\"dot\"") == 1);
    ChartStyle box;
    box.tower_roots.insert({1, 3, 0});
    CHECK(count(render_svg(one, box), "class=\"box\"") == 1);
}

TEST_CASE("glyphs follow cells") {
    const auto& c = small().h8;
    ChartStyle st;
    bool circle = false;
    for (auto [s, t] : c.nonzero())
        for (std::size_t i = 0; i < c.dim(s, t); ++i) circle |= glyph_for(c, st, s, t, i) == Glyph::Circle;
    CHECK(circle);
    CHECK(count(render_svg(c), "class=\"circle\"") > 0);
}

TEST_CASE("text and json") {
    const auto& c = small().f2;
    auto txt = render_text(c, 0, 10, 0, 4);
    CHECK(txt.find("\n0 1.") != std::string::npos);
    auto j = chart_json(c);
    CHECK(j["groups"].size() == c.nonzero().size());
    CHECK(j["products"].contains("h0"));
}
