#include "extforge/bgpoly.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace extforge {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("bgpoly: coefficient overflow");
    return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("bgpoly: coefficient overflow");
    return r;
}

int min_stem(const std::vector<std::pair<int, int>>& cells) {
    int lo = std::numeric_limits<int>::max();
    for (auto [st, s] : cells) lo = std::min(lo, st);
    return cells.empty() ? 0 : lo;
}

int min_s(const std::vector<std::pair<int, int>>& cells) {
    int lo = std::numeric_limits<int>::max();
    for (auto [st, s] : cells) lo = std::min(lo, s);
    return cells.empty() ? 0 : lo;
}

}  // namespace

BGPolynomial BGPolynomial::monomial(int k, int l, int m, std::uint64_t a) {
    BGPolynomial p;
    if (a) p.c_[{k, l, m}] = a;
    return p;
}

std::uint64_t BGPolynomial::coefficient(int k, int l, int m) const {
    auto it = c_.find({k, l, m});
    return it == c_.end() ? 0 : it->second;
}

int BGPolynomial::max_power(int var) const {
    int best = 0;
    for (const auto& [key, a] : c_) best = std::max(best, key[var]);
    return best;
}

std::uint64_t BGPolynomial::value_at_one() const {
    std::uint64_t v = 0;
    for (const auto& [key, a] : c_) v = checked_add(v, a);
    return v;
}

BGPolynomial& BGPolynomial::operator+=(const BGPolynomial& o) {
    for (const auto& [key, a] : o.c_) c_[key] = checked_add(c_[key], a);
    return *this;
}

BGPolynomial operator*(const BGPolynomial& a, const BGPolynomial& b) {
    BGPolynomial out;
    for (const auto& [x, p] : a.c_)
        for (const auto& [y, q] : b.c_) {
            BGPolynomial::Key z{x[0] + y[0], x[1] + y[1], x[2] + y[2]};
            out.c_[z] = checked_add(out.c_[z], checked_mul(p, q));
        }
    return out;
}

std::string BGPolynomial::to_string() const {
    if (c_.empty()) return "0";
    std::vector<std::pair<Key, std::uint64_t>> v(c_.begin(), c_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        if (a.first[0] != b.first[0]) return a.first[0] < b.first[0];
        if (a.first[2] != b.first[2]) return a.first[2] > b.first[2];
        return a.first[1] < b.first[1];
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, a] : v) {
        if (!first) os << " + ";
        first = false;
        std::vector<std::string> parts;
        if (a != 1) parts.push_back(std::to_string(a));
        const char* names = "stx";
        for (int i = 0; i < 3; ++i) {
            if (!key[i]) continue;
            std::string f(1, names[i]);
            if (key[i] > 1) f += "^" + std::to_string(key[i]);
            parts.push_back(f);
        }
        if (parts.empty()) parts.push_back("1");
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? " " : "") << parts[i];
    }
    return os.str();
}

nlohmann::json BGPolynomial::to_json() const {
    auto j = nlohmann::json::array();
    for (const auto& [key, a] : c_) j.push_back({{"k", key[0]}, {"l", key[1]}, {"m", key[2]}, {"a", a}});
    return j;
}

BGPolynomial bg_f(int i) {
    if (i < 0) throw std::invalid_argument("bgpoly: index must be non-negative");
    static std::mutex mu;
    static std::vector<BGPolynomial> memo{BGPolynomial::one(), BGPolynomial::monomial(0, 0, 1)};
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(memo.size()) <= i) {
        int n = static_cast<int>(memo.size());
        int j = n / 2;
        BGPolynomial next;
        if (n % 2 == 0) {
            next = BGPolynomial::monomial(0, j, 0) * memo[j] + BGPolynomial::monomial(1, j + 1, 0) * memo[j - 1];
        } else {
            next = BGPolynomial::monomial(0, j, 1) * memo[j];
        }
        memo.push_back(std::move(next));
    }
    return memo[i];
}

BGPolynomial bg_f_multi(const std::vector<int>& I) {
    BGPolynomial p = BGPolynomial::one();
    for (int i : I) {
        if (i <= 0) throw std::invalid_argument("bgpoly: multi-index entries must be positive");
        p = p * bg_f(i);
    }
    return p;
}

LemmaReport check_lemma(int i) {
    LemmaReport r;
    r.i = i;
    BGPolynomial f = bg_f(i);
    unsigned u = static_cast<unsigned>(i);
    int ones = std::popcount(u);
    int digits = i == 0 ? 1 : std::bit_width(u);

    r.items[0] = true;
    for (const auto& [key, a] : f.terms())
        if (key[1] + key[2] != i) r.items[0] = false;
    if (!r.items[0]) r.notes.push_back("a monomial has l + m != i");

    BGPolynomial mod_s;
    for (const auto& [key, a] : f.terms())
        if (key[0] == 0) mod_s += BGPolynomial::monomial(0, key[1], key[2], a);
    r.items[1] = mod_s == BGPolynomial::monomial(0, i - ones, ones);
    if (!r.items[1]) r.notes.push_back("f mod s is " + mod_s.to_string());

    r.items[2] = f.max_power(2) <= digits;
    if (!r.items[2]) r.notes.push_back("x-degree exceeds the number of digits");

    // ones to the left of the rightmost zero digit; none when i = 2^k - 1
    int expect = 0;
    int zero = -1;
    for (int b = 0; b < digits; ++b)
        if (!((u >> b) & 1u)) {
            zero = b;
            break;
        }
    if (zero >= 0) expect = std::popcount(u >> (zero + 1));
    r.items[3] = f.max_power(0) == expect;
    if (!r.items[3])
        r.notes.push_back("s-degree " + std::to_string(f.max_power(0)) + ", expected " + std::to_string(expect));
    return r;
}

std::uint64_t SummandList::total() const {
    std::uint64_t n = 0;
    for (const auto& d : kept) n = checked_add(n, d.multiplicity);
    for (const auto& d : below_window) n = checked_add(n, d.multiplicity);
    return n;
}

static nlohmann::json descriptor_json(const SummandDescriptor& d) {
    return {{"suspension", d.suspension},   {"e1_suspension", d.e1_suspension}, {"tensor_power", d.tensor_power},
            {"shift", d.shift},             {"multiplicity", d.multiplicity},   {"bottom_stem", d.bottom_stem},
            {"bottom_s", d.bottom_s}};
}

nlohmann::json SummandList::to_json() const {
    nlohmann::json j;
    j["I"] = I;
    j["kept"] = nlohmann::json::array();
    for (const auto& d : kept) j["kept"].push_back(descriptor_json(d));
    j["below_window"] = nlohmann::json::array();
    for (const auto& d : below_window) j["below_window"].push_back(descriptor_json(d));
    j["a1_terms"] = nlohmann::json::array();
    for (const auto& a : a1_terms)
        j["a1_terms"].push_back({{"factor", a.factor},
                                 {"index", a.index},
                                 {"tmf_index", a.tmf_index},
                                 {"suspension", a.suspension},
                                 {"shift", a.shift},
                                 {"note", a.note}});
    return j;
}

namespace {

void residues(std::size_t factor, int i, int susp, int shift, const std::vector<int>& I, std::vector<A1Residual>& out) {
    if (i <= 1) return;
    int j = i / 2;
    std::ostringstream os;
    os << "Ext_A(1)(";
    if (susp) os << "S^" << susp << " ";
    os << "tmf_" << j - 1;
    for (std::size_t p = 0; p < I.size(); ++p)
        if (p != factor) os << " (x) bo_" << I[p];
    os << " (x) M)";
    if (shift) os << "[-" << shift << "]";
    out.push_back({factor, i, j - 1, susp, shift, os.str()});
    if (i % 2 == 0) {
        residues(factor, j, susp + 8 * j, shift, I, out);
        residues(factor, j - 1, susp + 8 * (j + 1) + 1, shift + 1, I, out);
    } else {
        residues(factor, j, susp + 8 * j, shift, I, out);
    }
}

}  // namespace

SummandList enumerate_summands(const std::vector<int>& I, const E1Window& w,
                               const std::vector<std::pair<int, int>>& cells) {
    SummandList out;
    out.I = I;
    BGPolynomial f = bg_f_multi(I);
    int weight = 0;
    for (int i : I) weight += i;
    int c_stem = min_stem(cells), c_s = min_s(cells);
    for (const auto& [key, a] : f.terms()) {
        auto [k, l, m] = key;
        SummandDescriptor d;
        d.suspension = 8 * l + k;
        d.e1_suspension = 8 * weight + d.suspension;
        d.tensor_power = m;
        d.shift = k;
        d.multiplicity = a;
        d.bottom_stem = 8 * weight + 8 * l + c_stem;
        d.bottom_s = k + c_s;
        bool reaches = d.bottom_stem < w.stem_hi && d.bottom_s < w.s_hi;
        (reaches ? out.kept : out.below_window).push_back(d);
    }
    auto order = [](const SummandDescriptor& a, const SummandDescriptor& b) {
        return std::tie(a.suspension, a.tensor_power, a.shift) < std::tie(b.suspension, b.tensor_power, b.shift);
    };
    std::sort(out.kept.begin(), out.kept.end(), order);
    std::sort(out.below_window.begin(), out.below_window.end(), order);
    for (std::size_t p = 0; p < I.size(); ++p) residues(p, I[p], 0, 0, I, out.a1_terms);
    return out;
}

bool a1_vanishing_filter(int t_minus_s, int s) {
    // s > (t - s)/7 + 51/7, cleared of denominators
    return 7LL * s > static_cast<long long>(t_minus_s) + 51;
}

std::vector<E1Entry> e1_window(int n, const E1Window& w, const std::vector<std::pair<int, int>>& cells,
                               bool apply_a1_line) {
    if (n < 1) throw std::invalid_argument("e1_window: line must be positive");
    std::vector<E1Entry> out;
    int c_stem = min_stem(cells);
    int max_weight = (w.stem_hi - 1 - c_stem) / 8;
    if (w.stem_hi - 1 - c_stem < 0 || max_weight < n) return out;
    std::vector<int> I(n, 1);
    // compositions of weight <= max_weight into n positive parts, lexicographic
    for (;;) {
        int weight = 0;
        for (int i : I) weight += i;
        if (weight <= max_weight) {
            E1Entry e;
            e.I = I;
            e.summands = enumerate_summands(I, w, cells);
            for (const auto& a : e.summands.a1_terms) {
                // worst corner of the window in abutment coordinates
                bool above = apply_a1_line && w.s_lo < w.s_hi && w.stem_lo < w.stem_hi &&
                             a1_vanishing_filter(w.stem_hi - 1 - n, w.s_lo + n);
                e.audit.push_back((above ? "dropped, above the A(1) line: " : "requires Ext_A(1) computation: ") + a.note);
            }
            out.push_back(std::move(e));
        }
        int p = n - 1;
        while (p >= 0) {
            ++I[p];
            int tot = 0;
            for (int q = 0; q <= p; ++q) tot += I[q];
            if (tot + (n - 1 - p) <= max_weight) break;
            I[p] = 1;
            --p;
        }
        if (p < 0) break;
    }
    return out;
}

nlohmann::json to_json(const std::vector<E1Entry>& e) {
    auto j = nlohmann::json::array();
    for (const auto& x : e) {
        auto s = x.summands.to_json();
        s["audit"] = x.audit;
        j.push_back(s);
    }
    return j;
}

std::pair<int, int> differential_target(int stem, int s, int n, int weight) {
    return {stem - 8 * weight + n - 1, s + 1 - n};
}

}  // namespace extforge
