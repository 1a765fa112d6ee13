#include "extforge/vanishing.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "extforge/bgpoly.hpp"
#include "extforge/resolve.hpp"

namespace extforge {

std::vector<VanishingSource> vanishing_sources(int down) {
    std::vector<VanishingSource> v{
        {"nu^2[18]", 120, 26}, {"epsilon[18]", 122, 26}, {"kappa[18]", 128, 26}, {"kbar eta^2[18]", 136, 28}};
    for (auto& x : v) {
        x.stem -= 48 * down;
        x.s -= 8 * down;
        if (down) x.name += "/v2^" + std::to_string(8 * down);
    }
    return v;
}

namespace {

bool all_ok(const std::vector<TargetCheck>& v) {
    return std::all_of(v.begin(), v.end(), [](const TargetCheck& c) { return c.ok(); });
}

std::string index_string(const std::vector<int>& I) {
    std::string s = "(";
    for (std::size_t i = 0; i < I.size(); ++i) s += (i ? "," : "") + std::to_string(I[i]);
    return s + ")";
}

// Ext groups of bo_1^{(x)m} (x) H(8, v1^8), m <= 3 computed, m >= 4 bounded
// above by filtering the extra factors by cell degree
class EdgeGroups {
public:
    EdgeGroups(const FreeComplex& C, int max_s, int max_t, int jobs) {
        ChartOptions o;
        o.window = {0, max_s, 0, max_t, std::nullopt, std::nullopt};
        o.h_products = {};
        o.jobs = jobs;
        FiniteModule M = trivial();
        for (int m = 0; m <= 3; ++m) {
            if (m == 1) M = bo(1);
            if (m > 1) M = tensor(M, bo(1));
            charts_.push_back(ext_cell(C, M, o));
        }
        FiniteModule b = bo(1);
        for (int d = b.min_degree(); d <= b.max_degree(); ++d)
            if (b.dim_in_degree(d)) bo1_[d] = static_cast<long>(b.dim_in_degree(d));
    }

    const ExtChart& chart(int m) const { return charts_[m]; }

    // nullopt when some group needed lies outside the computed range
    std::optional<std::size_t> dim(int m, int stem, int s) {
        if (s < 0 || stem < 0) return 0;
        if (m <= 3) {
            if (!charts_[m].computed(s, stem + s)) return std::nullopt;
            return charts_[m].dim(s, stem + s);
        }
        std::size_t total = 0;
        for (auto [d, c] : cells(m - 3)) {
            auto x = dim(3, stem - d, s);
            if (!x) return std::nullopt;
            total += static_cast<std::size_t>(c) * *x;
        }
        return total;
    }

private:
    const PoincareSeries& cells(int k) {
        while (static_cast<int>(powers_.size()) <= k)
            powers_.push_back(powers_.empty() ? PoincareSeries{{0, 1}} : multiply(powers_.back(), bo1_));
        return powers_[k];
    }

    std::vector<ExtChart> charts_;
    PoincareSeries bo1_;
    std::vector<PoincareSeries> powers_;
};

void settle(TargetCheck& c, std::optional<std::size_t> d, bool fallback) {
    if (d) {
        c.dim = *d;
        return;
    }
    if (fallback) {
        c.in_range = false;
        c.note = "outside the window";
    } else {
        c.dim = c.expected + 1;
        c.note = "needs groups outside the computed range";
    }
}

// non-increasing sequences of n positive parts, weight <= W, not all ones
void partitions(int n, int W, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
    if (static_cast<int>(cur.size()) == n) {
        if (std::any_of(cur.begin(), cur.end(), [](int i) { return i > 1; })) f(cur);
        return;
    }
    int used = 0;
    for (int i : cur) used += i;
    int left = n - static_cast<int>(cur.size()) - 1;
    int hi = cur.empty() ? W : cur.back();
    for (int i = 1; i <= hi && used + i + left <= W; ++i) {
        cur.push_back(i);
        partitions(n, W, cur, f);
        cur.pop_back();
    }
}

}  // namespace

bool VanishingReport::edge_ok() const { return all_ok(edge); }
bool VanishingReport::beyond_ok() const { return all_ok(beyond); }
bool VanishingReport::other_ok() const { return all_ok(other) && a1_flagged == 0; }
bool VanishingReport::sources_ok() const {
    for (std::size_t i = 0; i < sources.size(); ++i) {
        bool in = sources[i].stem + sources[i].s <= max_t && sources[i].s < max_s;
        if (in && source_dims[i] == 0) return false;
        if (!in && !fallback) return false;
    }
    return true;
}

VanishingReport vanishing_windows(const VanishingOptions& opt) {
    VanishingReport r;
    r.fallback = opt.fallback;
    r.sources = vanishing_sources(opt.fallback ? 1 : 0);
    r.max_s = opt.fallback ? 22 : 30;
    r.max_t = opt.fallback ? 90 : 166;

    auto P = minimal_resolution(Profile::A(2), r.max_s, r.max_t, opt.jobs);
    ChartOptions o;
    o.window = {0, r.max_s, 0, r.max_t, std::nullopt, std::nullopt};
    o.jobs = opt.jobs;
    auto f2 = ext_f2(*P, o);
    auto h8 = build_h8(*P, f2);
    auto v = build_h8v18(*P, f2, h8);
    EdgeGroups groups(v.complex, r.max_s, r.max_t, opt.jobs);

    for (const auto& src : r.sources) {
        const auto& c0 = groups.chart(0);
        int t = src.stem + src.s;
        r.source_dims.push_back(c0.computed(src.s, t) ? c0.dim(src.s, t) : 0);
    }

    for (std::size_t i = 0; i < r.sources.size(); ++i) {
        const auto& src = r.sources[i];
        bool kappa = i == 2;
        for (int k = 1; k <= src.s + 1; ++k) {
            auto [stem, s] = differential_target(src.stem, src.s, k, k);
            TargetCheck c;
            c.source = src.name;
            c.I.assign(k, 1);
            c.stem = stem;
            c.s = s;
            if (k <= 3) {
                c.method = "direct";
                if (kappa && k == 1) {
                    c.expected = 1;
                    c.note = "the one nonzero group; ruled out by v2^8 divisibility, not checked here";
                }
                settle(c, groups.dim(k, stem, s), opt.fallback);
                r.edge.push_back(c);
            } else {
                c.method = stem < 0 ? "connectivity" : "cell filtration";
                settle(c, groups.dim(k, stem, s), opt.fallback);
                r.beyond.push_back(c);
            }
        }
    }

    if (opt.other_terms) {
        for (const auto& src : r.sources) {
            // every d_r target sits at (stem - 1, s + 1) in the abutment
            bool above = a1_vanishing_filter(src.stem - 1, src.s + 1);
            for (int n = 1; n <= src.s + 1; ++n) {
                int W = (src.stem + n - 1) / 8;
                std::vector<int> cur;
                partitions(n, W, cur, [&](const std::vector<int>& I) {
                    int w = 0;
                    for (int i : I) w += i;
                    auto [stem, s] = differential_target(src.stem, src.s, n, w);
                    TargetCheck c;
                    c.source = src.name;
                    c.I = I;
                    c.stem = stem;
                    c.s = s;
                    c.method = "summands";
                    std::optional<std::size_t> total = 0;
                    const auto f = bg_f_multi(I);
                    for (const auto& [key, a] : f.terms()) {
                        auto [k, l, m] = key;
                        auto d = groups.dim(m, stem - 8 * l, s - k);
                        if (!d) {
                            total.reset();
                            break;
                        }
                        *total += a * *d;
                    }
                    settle(c, total, opt.fallback);
                    auto res = enumerate_summands(I, {0, 0, 0, 0}).a1_terms.size();
                    (above ? r.a1_dropped : r.a1_flagged) += res;
                    if (!above && res) c.note = "A(1) residues below the line";
                    r.other.push_back(c);
                });
            }
        }
    }
    return r;
}

std::vector<std::string> VanishingReport::lines() const {
    std::vector<std::string> out;
    auto fmt = [](const TargetCheck& c) {
        std::ostringstream os;
        os << (c.in_range ? (c.ok() ? "ok   " : "FAIL ") : "skip ") << c.source << " -> bo" << index_string(c.I) << " ("
           << c.stem << "," << c.s << ") " << c.method << ": dim " << c.dim;
        if (c.expected) os << " (expected " << c.expected << ")";
        if (!c.note.empty()) os << "; " << c.note;
        return os.str();
    };
    std::ostringstream head;
    head << (fallback ? "reduced window" : "full window") << ", A(2) resolution s < " << max_s << ", t <= " << max_t;
    out.push_back(head.str());
    for (std::size_t i = 0; i < sources.size(); ++i) {
        bool in = sources[i].stem + sources[i].s <= max_t && sources[i].s < max_s;
        out.push_back("source " + sources[i].name + " (" + std::to_string(sources[i].stem) + "," +
                      std::to_string(sources[i].s) +
                      "): " + (in ? "dim " + std::to_string(source_dims[i]) : std::string("outside the window")));
    }
    for (const auto& c : edge) out.push_back(fmt(c));
    std::size_t nz = 0, skipped = 0;
    for (const auto& c : beyond) {
        if (!c.ok()) out.push_back(fmt(c));
        nz += c.in_range && c.dim;
        skipped += !c.in_range;
    }
    out.push_back("bo_1^k, k >= 4: " + std::to_string(beyond.size()) + " targets, " + std::to_string(nz) +
                  " with nonzero groups, " + std::to_string(skipped) + " outside the window");
    if (!other.empty()) {
        nz = skipped = 0;
        for (const auto& c : other) {
            if (!c.ok()) out.push_back(fmt(c));
            nz += c.in_range && c.dim;
            skipped += !c.in_range;
        }
        out.push_back("other I: " + std::to_string(other.size()) + " targets, " + std::to_string(nz) +
                      " with nonzero summand groups, " + std::to_string(skipped) + " outside the window; A(1) residues " +
                      std::to_string(a1_dropped) + " dropped, " + std::to_string(a1_flagged) + " flagged");
    }
    return out;
}

nlohmann::json VanishingReport::to_json() const {
    auto checks = [](const std::vector<TargetCheck>& v) {
        auto j = nlohmann::json::array();
        for (const auto& c : v)
            j.push_back({{"source", c.source},
                         {"I", c.I},
                         {"stem", c.stem},
                         {"s", c.s},
                         {"method", c.method},
                         {"in_range", c.in_range},
                         {"dim", c.dim},
                         {"expected", c.expected},
                         {"ok", c.ok()},
                         {"note", c.note}});
        return j;
    };
    nlohmann::json j;
    j["fallback"] = fallback;
    j["max_s"] = max_s;
    j["max_t"] = max_t;
    j["sources"] = nlohmann::json::array();
    for (std::size_t i = 0; i < sources.size(); ++i)
        j["sources"].push_back(
            {{"name", sources[i].name}, {"stem", sources[i].stem}, {"s", sources[i].s}, {"dim", source_dims[i]}});
    j["edge"] = checks(edge);
    j["beyond"] = checks(beyond);
    j["other"] = checks(other);
    j["a1_dropped"] = a1_dropped;
    j["a1_flagged"] = a1_flagged;
    j["ok"] = ok();
    j["other_ok"] = other_ok();
    return j;
}

}  // namespace extforge
