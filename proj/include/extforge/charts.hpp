#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "extforge/resolve.hpp"

namespace extforge {

// glyph names double as SVG class names
enum class Glyph { Dot, Circle, Triangle, OpenTriangle, Box, Cross };
std::string glyph_name(Glyph g);

struct ChartStyle {
    // by cell label; cells not listed fall back to the cell's position in the chart
    std::map<std::string, Glyph> cell_glyphs;
    // (s, t, class index) of h_{2,1}-tower roots and of inherited tower classes
    std::set<std::tuple<int, int, std::size_t>> tower_roots, tower_members;
    std::optional<int> stem_min, stem_max, s_min, s_max;
    bool h0 = true, h1 = true, h2 = true;
    int unit = 24;  // pixels per stem and per filtration
};

// glyph of class i at (s, t)
Glyph glyph_for(const ExtChart& chart, const ChartStyle& style, int s, int t, std::size_t i);
// one label per class: x_{stem,s}, numbered when the group has rank > 1, then
// the index suffix and the cell carrying it
std::vector<std::string> class_labels(const ExtChart& chart, int s, int t);

// stem, s, dim, labels; nonzero bidegrees only, ordered by stem then s
std::string render_tsv(const ExtChart& chart);
// dims only: a chart whose groups carry no representatives
ExtChart parse_tsv(const std::string& tsv);
// stems across, s upward; '.' for zero, digits for rank, blank when not computed
std::string render_text(const ExtChart& chart, int stem_min, int stem_max, int s_min, int s_max);
std::string render_svg(const ExtChart& chart, const ChartStyle& style = {});
nlohmann::json chart_json(const ExtChart& chart);

}  // namespace extforge
