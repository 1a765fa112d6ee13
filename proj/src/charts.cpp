#include "extforge/charts.hpp"

#include <algorithm>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace extforge {

std::string glyph_name(Glyph g) {
    switch (g) {
        case Glyph::Dot: return "dot";
        case Glyph::Circle: return "circle";
        case Glyph::Triangle: return "triangle";
        case Glyph::OpenTriangle: return "open-triangle";
        case Glyph::Box: return "box";
        case Glyph::Cross: return "cross";
    }
    return "dot";
}

Glyph glyph_for(const ExtChart& chart, const ChartStyle& style, int s, int t, std::size_t i) {
    if (style.tower_roots.count({s, t, i})) return Glyph::Box;
    if (style.tower_members.count({s, t, i})) return Glyph::Cross;
    const auto& g = chart.groups.at({s, t});
    if (i >= g.cells.size()) return Glyph::Dot;
    int cell = g.cells[i];
    if (cell >= 0 && cell < static_cast<int>(chart.cells.size())) {
        auto it = style.cell_glyphs.find(chart.cells[cell].label);
        if (it != style.cell_glyphs.end()) return it->second;
    }
    static const Glyph by_position[] = {Glyph::Dot, Glyph::Circle, Glyph::Triangle, Glyph::OpenTriangle};
    return cell >= 0 && cell < 4 ? by_position[cell] : Glyph::Dot;
}

std::vector<std::string> class_labels(const ExtChart& chart, int s, int t) {
    const auto& g = chart.groups.at({s, t});
    std::vector<std::string> out;
    std::string base = "x_{" + std::to_string(t - s) + "," + std::to_string(s) + "}";
    for (std::size_t i = 0; i < g.dim(); ++i) {
        std::string l = base;
        if (g.dim() > 1) l += "#" + std::to_string(i);
        l += chart.index_suffix;
        if (i < g.cells.size() && g.cells[i] >= 0 && g.cells[i] < static_cast<int>(chart.cells.size()))
            l += chart.cells[g.cells[i]].label;
        out.push_back(l);
    }
    return out;
}

namespace {

std::vector<std::pair<int, int>> rows_in_order(const ExtChart& chart) {
    auto nz = chart.nonzero();
    std::sort(nz.begin(), nz.end(), [](auto a, auto b) {
        return std::make_pair(a.second - a.first, a.first) < std::make_pair(b.second - b.first, b.first);
    });
    return nz;
}

}  // namespace

std::string render_tsv(const ExtChart& chart) {
    std::ostringstream os;
    os << "stem\ts\tdim\tlabels\n";
    for (auto [s, t] : rows_in_order(chart)) {
        os << t - s << '\t' << s << '\t' << chart.dim(s, t) << '\t';
        auto l = class_labels(chart, s, t);
        for (std::size_t i = 0; i < l.size(); ++i) os << (i ? ";" : "") << l[i];
        os << '\n';
    }
    return os.str();
}

ExtChart parse_tsv(const std::string& tsv) {
    ExtChart c;
    std::istringstream in(tsv);
    std::string line;
    if (!std::getline(in, line) || line != "stem\ts\tdim\tlabels") throw std::invalid_argument("parse_tsv: bad header");
    static const std::regex label_re(R"(x_\{(-?\d+),(\d+)\}(#\d+)?(.*?)(\[-?\d+\])?)");
    bool suffix_seen = false;
    std::map<std::string, int> cell_index;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        int stem, s;
        std::size_t dim;
        std::string labels;
        if (!(ls >> stem >> s >> dim)) throw std::invalid_argument("parse_tsv: bad row " + std::to_string(lineno));
        std::getline(ls >> std::ws, labels);
        ExtGroup g;
        g.s = s;
        g.t = stem + s;
        g.reps.assign(dim, BitVec(0));
        std::vector<std::string> parts;
        std::stringstream ps(labels);
        for (std::string p; std::getline(ps, p, ';');) parts.push_back(p);
        if (!parts.empty() && parts.size() != dim)
            throw std::invalid_argument("parse_tsv: label count differs from dim on row " + std::to_string(lineno));
        for (const auto& p : parts) {
            std::smatch m;
            if (!std::regex_match(p, m, label_re)) throw std::invalid_argument("parse_tsv: bad label " + p);
            if (!suffix_seen) {
                c.index_suffix = m[4];
                suffix_seen = true;
            }
            if (m[5].matched) {
                std::string cl = m[5];
                auto [it, fresh] = cell_index.try_emplace(cl, static_cast<int>(c.cells.size()));
                if (fresh) c.cells.push_back({cl, 0, std::stoi(cl.substr(1))});
                g.cells.push_back(it->second);
            }
        }
        if (!c.groups.emplace(std::make_pair(s, stem + s), std::move(g)).second)
            throw std::invalid_argument("parse_tsv: repeated bidegree on row " + std::to_string(lineno));
    }
    // cells in the order of their stems, as a cone lists them
    std::vector<int> order(c.cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return c.cells[a].t < c.cells[b].t; });
    std::vector<int> where(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) where[order[i]] = static_cast<int>(i);
    std::vector<Cell> sorted;
    for (int i : order) sorted.push_back(c.cells[i]);
    c.cells = sorted;
    for (auto& [k, g] : c.groups)
        for (auto& x : g.cells) x = where[x];
    return c;
}

std::string render_text(const ExtChart& chart, int stem_min, int stem_max, int s_min, int s_max) {
    std::ostringstream os;
    int w = std::max(std::to_string(s_max).size(), std::to_string(s_min).size());
    for (int s = s_max; s >= s_min; --s) {
        std::string n = std::to_string(s);
        os << std::string(w - n.size(), ' ') << n << " ";
        for (int stem = stem_min; stem <= stem_max; ++stem) {
            if (!chart.computed(s, stem + s)) {
                os << ' ';
                continue;
            }
            auto d = chart.dim(s, stem + s);
            os << (d == 0 ? '.' : d < 10 ? char('0' + d) : '+');
        }
        os << '\n';
    }
    os << std::string(w + 1, ' ');
    for (int stem = stem_min; stem <= stem_max; ++stem) os << (stem % 10 == 0 ? '|' : stem % 5 == 0 ? ':' : ' ');
    os << '\n' << std::string(w + 1, ' ') << "stems " << stem_min << ".." << stem_max << '\n';
    return os.str();
}

namespace {

struct Layout {
    int stem_min, stem_max, s_min, s_max, unit, margin = 40;
    double x(int stem, std::size_t i, std::size_t n) const {
        double spread = unit * 0.28;
        double off = n > 1 ? (static_cast<double>(i) - (n - 1) / 2.0) * spread : 0.0;
        return margin + (stem - stem_min + 0.5) * unit + off;
    }
    double y(int s) const { return margin + (s_max - s + 0.5) * unit; }
    int width() const { return 2 * margin + (stem_max - stem_min + 1) * unit; }
    int height() const { return 2 * margin + (s_max - s_min + 1) * unit; }
};

std::string num(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << v;
    return os.str();
}

void glyph_svg(std::ostream& os, Glyph g, double x, double y, double r) {
    std::string cls = "class=\"" + glyph_name(g) + "\"";
    switch (g) {
        case Glyph::Dot:
            os << "<circle " << cls << " cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r)
               << "\" fill=\"black\"/>";
            break;
        case Glyph::Circle:
            os << "<circle " << cls << " cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r)
               << "\" fill=\"white\" stroke=\"black\"/>";
            break;
        case Glyph::Triangle:
        case Glyph::OpenTriangle:
            os << "<polygon " << cls << " points=\"" << num(x) << "," << num(y - r * 1.3) << " " << num(x - r * 1.2)
               << "," << num(y + r) << " " << num(x + r * 1.2) << "," << num(y + r) << "\" fill=\""
               << (g == Glyph::Triangle ? "black" : "white") << "\" stroke=\"black\"/>";
            break;
        case Glyph::Box:
            os << "<rect " << cls << " x=\"" << num(x - r) << "\" y=\"" << num(y - r) << "\" width=\"" << num(2 * r)
               << "\" height=\"" << num(2 * r) << "\" fill=\"white\" stroke=\"black\"/>";
            break;
        case Glyph::Cross:
            os << "<path " << cls << " d=\"M" << num(x - r) << "," << num(y - r) << " L" << num(x + r) << ","
               << num(y + r) << " M" << num(x - r) << "," << num(y + r) << " L" << num(x + r) << "," << num(y - r)
               << "\" stroke=\"black\"/>";
            break;
    }
}

}  // namespace

std::string render_svg(const ExtChart& chart, const ChartStyle& style) {
    auto nz = chart.nonzero();
    int lo_stem = 0, hi_stem = 0, lo_s = 0, hi_s = 0;
    bool first = true;
    for (auto [s, t] : nz) {
        lo_stem = first ? t - s : std::min(lo_stem, t - s);
        hi_stem = first ? t - s : std::max(hi_stem, t - s);
        lo_s = first ? s : std::min(lo_s, s);
        hi_s = first ? s : std::max(hi_s, s);
        first = false;
    }
    Layout L{style.stem_min.value_or(std::min(lo_stem, 0)), style.stem_max.value_or(hi_stem),
             style.s_min.value_or(std::min(lo_s, 0)), style.s_max.value_or(hi_s), style.unit};
    auto inside = [&](int s, int t) {
        return t - s >= L.stem_min && t - s <= L.stem_max && s >= L.s_min && s <= L.s_max;
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << L.width() << "\" height=\"" << L.height()
       << "\" viewBox=\"0 0 " << L.width() << " " << L.height() << "\">\n";
    os << "<title>Ext " << chart.algebra << (chart.coefficients.empty() ? "" : " " + chart.coefficients)
       << "</title>\n";
    // grid and axes, t - s across and s up
    os << "<g class=\"grid\" stroke=\"#e4e4e4\" stroke-width=\"0.5\">\n";
    for (int stem = L.stem_min; stem <= L.stem_max + 1; ++stem) {
        double x = L.margin + (stem - L.stem_min) * L.unit;
        os << "<line x1=\"" << num(x) << "\" y1=\"" << L.margin << "\" x2=\"" << num(x) << "\" y2=\""
           << L.height() - L.margin << "\"/>\n";
    }
    for (int s = L.s_min; s <= L.s_max + 1; ++s) {
        double y = L.margin + (s - L.s_min) * L.unit;
        os << "<line x1=\"" << L.margin << "\" y1=\"" << num(y) << "\" x2=\"" << L.width() - L.margin << "\" y2=\""
           << num(y) << "\"/>\n";
    }
    os << "</g>\n<g class=\"axes\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n";
    for (int stem = L.stem_min; stem <= L.stem_max; ++stem)
        if (stem % 2 == 0)
            os << "<text x=\"" << num(L.x(stem, 0, 1)) << "\" y=\"" << L.height() - L.margin + 14 << "\">" << stem
               << "</text>\n";
    for (int s = L.s_min; s <= L.s_max; ++s)
        if (s % 2 == 0)
            os << "<text x=\"" << L.margin - 12 << "\" y=\"" << num(L.y(s) + 3) << "\">" << s << "</text>\n";
    os << "</g>\n";

    // product lines below the glyphs
    struct Prod {
        const char* name;
        bool on;
    };
    for (Prod p : {Prod{"h0", style.h0}, Prod{"h1", style.h1}, Prod{"h2", style.h2}}) {
        if (!p.on) continue;
        auto it = chart.products.find(p.name);
        auto sh = chart.product_shift.find(p.name);
        if (it == chart.products.end() || sh == chart.product_shift.end()) continue;
        os << "<g class=\"" << p.name << "\" stroke=\"black\" stroke-width=\"1\">\n";
        for (const auto& [src, m] : it->second) {
            auto [s, t] = src;
            int s2 = s + sh->second.first, t2 = t + sh->second.second;
            if (!inside(s, t) || !inside(s2, t2) || !chart.computed(s, t) || !chart.computed(s2, t2)) continue;
            std::size_t n1 = chart.dim(s, t), n2 = chart.dim(s2, t2);
            for (std::size_t j = 0; j < m.cols() && j < n1; ++j)
                for (std::size_t i = 0; i < m.rows() && i < n2; ++i)
                    if (m.get(i, j))
                        os << "<line x1=\"" << num(L.x(t - s, j, n1)) << "\" y1=\"" << num(L.y(s)) << "\" x2=\""
                           << num(L.x(t2 - s2, i, n2)) << "\" y2=\"" << num(L.y(s2)) << "\"/>\n";
        }
        os << "</g>\n";
    }

    std::sort(nz.begin(), nz.end(), [](auto a, auto b) {
        return std::make_pair(a.second - a.first, a.first) < std::make_pair(b.second - b.first, b.first);
    });
    double r = L.unit * 0.12;
    for (auto [s, t] : nz) {
        if (!inside(s, t)) continue;
        std::size_t n = chart.dim(s, t);
        auto labels = class_labels(chart, s, t);
        os << "<g class=\"bidegree\" data-stem=\"" << t - s << "\" data-s=\"" << s << "\" data-dim=\"" << n << "\">";
        for (std::size_t i = 0; i < n; ++i) {
            glyph_svg(os, glyph_for(chart, style, s, t, i), L.x(t - s, i, n), L.y(s), r);
            os << "<title>" << labels[i] << "</title>";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

nlohmann::json chart_json(const ExtChart& chart) {
    nlohmann::json j;
    j["algebra"] = chart.algebra;
    j["coefficients"] = chart.coefficients;
    j["valid_s"] = chart.valid_s;
    j["valid_t"] = chart.valid_t;
    if (chart.valid_stem_below) j["valid_stem_below"] = *chart.valid_stem_below;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : chart.cells) j["cells"].push_back({{"label", c.label}, {"s", c.s}, {"t", c.t}});
    j["groups"] = nlohmann::json::array();
    for (auto [s, t] : rows_in_order(chart))
        j["groups"].push_back({{"stem", t - s}, {"s", s}, {"dim", chart.dim(s, t)}, {"labels", class_labels(chart, s, t)}});
    j["products"] = nlohmann::json::object();
    for (const auto& [name, by] : chart.products) {
        auto edges = nlohmann::json::array();
        for (const auto& [src, m] : by)
            for (std::size_t jj = 0; jj < m.cols(); ++jj)
                for (std::size_t i = 0; i < m.rows(); ++i)
                    if (m.get(i, jj)) edges.push_back({src.second - src.first, src.first, jj, i});
        j["products"][name] = edges;
    }
    return j;
}

}  // namespace extforge
