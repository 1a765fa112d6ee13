#include "extforge/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "extforge/bgpoly.hpp"
#include "extforge/charts.hpp"
#include "extforge/suites.hpp"

namespace fs = std::filesystem;

namespace extforge::cli {

// ---- descriptors

namespace {

class DescriptorParser {
public:
    DescriptorParser(const std::string& s, const Profile& p) : src_(s), p_(p) {}

    Coefficients parse() {
        Coefficients c = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + src_.substr(pos_) + "'");
        c.text = normalize(c);
        return c;
    }

private:
    struct Part {
        Coefficients::Cells cells = Coefficients::Cells::None;
        std::optional<FiniteModule> module;
        std::vector<std::string> words;
        std::vector<int> bo;  // bo indices, for the label suffix
        bool only_bo = true;
    };

    [[noreturn]] void fail(const std::string& why) const {
        throw UsageError("descriptor '" + src_ + "': " + why);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(const std::string& tok) {
        skip_ws();
        if (src_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    int integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < src_.size() && src_[pos_] == '-') ++pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (start == pos_ || (pos_ == start + 1 && src_[start] == '-')) fail("expected an integer");
        try {
            return std::stoi(src_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            fail("integer out of range");
        }
    }

    Coefficients expr() {
        Part acc = term();
        for (;;) {
            if (eat("⊗") || eat("(x)") || eat("*") || eat("tensor")) {
                Part rhs = term();
                acc = combine(std::move(acc), std::move(rhs));
            } else {
                break;
            }
        }
        Coefficients c;
        c.cells = acc.cells;
        c.module = acc.module ? *acc.module : trivial(p_);
        if (acc.only_bo && !acc.bo.empty()) {
            c.index_suffix = "(";
            for (std::size_t i = 0; i < acc.bo.size(); ++i) c.index_suffix += (i ? "," : "") + std::to_string(acc.bo[i]);
            c.index_suffix += ")";
        }
        words_ = acc.words;
        return c;
    }

    Part combine(Part a, Part b) {
        if (a.cells != Coefficients::Cells::None && b.cells != Coefficients::Cells::None)
            fail("at most one of h8, h8v18 may appear");
        Part r;
        r.cells = a.cells != Coefficients::Cells::None ? a.cells : b.cells;
        if (a.module && b.module) r.module = tensor(*a.module, *b.module);
        else if (a.module) r.module = a.module;
        else r.module = b.module;
        r.words = a.words;
        r.words.insert(r.words.end(), b.words.begin(), b.words.end());
        r.bo = a.bo;
        r.bo.insert(r.bo.end(), b.bo.begin(), b.bo.end());
        r.only_bo = a.only_bo && b.only_bo;
        return r;
    }

    Part term() {
        skip_ws();
        if (eat("S^") || eat("Sigma^") || eat("Σ^")) {
            int k = integer();
            Part inner = term();
            if (!inner.module) inner.module = trivial(p_);
            inner.module = suspend(*inner.module, k);
            inner.words.insert(inner.words.begin(), "S^" + std::to_string(k));
            inner.only_bo = false;
            return inner;
        }
        if (eat("(")) {
            std::size_t save = words_.size();
            Coefficients c = expr();
            if (!eat(")")) fail("missing ')'");
            Part p;
            p.cells = c.cells;
            p.module = c.module;
            p.words = {"(" + join(words_) + ")"};
            words_.resize(save);
            p.only_bo = !c.index_suffix.empty();
            if (p.only_bo) {
                std::string inner = c.index_suffix.substr(1, c.index_suffix.size() - 2);
                std::stringstream ss(inner);
                for (std::string x; std::getline(ss, x, ',');) p.bo.push_back(std::stoi(x));
            }
            return p;
        }
        return atom();
    }

    Part atom() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
        Part r;
        auto indexed = [&](const char* what) {
            if (!eat(":")) fail(std::string(what) + " needs an index, as in " + what + ":1");
            int i = integer();
            if (i < 0) fail("negative index");
            return i;
        };
        if (name == "f2") {
            r.module = trivial(p_);
            r.words = {"f2"};
            r.only_bo = false;
        } else if (name == "h8" || name == "h8v18") {
            r.cells = name == "h8" ? Coefficients::Cells::H8 : Coefficients::Cells::H8V18;
            r.words = {name};
        } else if (name == "bo") {
            int i = indexed("bo");
            r.module = bo(i, p_);
            r.words = {"bo:" + std::to_string(i)};
            r.bo = {i};
        } else if (name == "tmfbg") {
            int j = indexed("tmfbg");
            r.module = tmf_bg(j, p_);
            r.words = {"tmfbg:" + std::to_string(j)};
            r.only_bo = false;
        } else if (name == "abar") {
            int n = indexed("abar");
            r.module = abar_truncation(n, 0, p_);
            r.words = {"abar:" + std::to_string(n)};
            r.only_bo = false;
        } else if (name == "a2qa1") {
            if (p_.name() != Profile::A(2).name()) fail("a2qa1 is a module over A(2) only");
            r.module = quotient_hopf_module(Profile::A(2), Profile::A(1));
            r.words = {"a2qa1"};
            r.only_bo = false;
        } else {
            fail(name.empty() ? "expected a coefficient" : "unknown coefficient '" + name + "'");
        }
        return r;
    }

    static std::string join(const std::vector<std::string>& w) {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " ⊗ " : "") + w[i];
        return s;
    }
    std::string normalize(const Coefficients&) const { return join(words_); }

    std::string src_;
    const Profile& p_;
    std::size_t pos_ = 0;
    std::vector<std::string> words_;
};

}  // namespace

Coefficients parse_descriptor(const std::string& s, const Profile& p) {
    try {
        return DescriptorParser(s, p).parse();
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError("descriptor '" + s + "': " + e.what());
    }
}

Profile parse_algebra(const std::string& s) {
    std::string k;
    for (char c : s)
        if (c != '(' && c != ')' && !std::isspace(static_cast<unsigned char>(c))) k += static_cast<char>(std::toupper(c));
    try {
        return Profile::parse(k);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

std::pair<int, int> parse_range(const std::string& s) {
    static const std::regex re(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw UsageError("window '" + s + "': expected a..b");
    int a = std::stoi(m[1]), b = std::stoi(m[2]);
    if (a > b) throw UsageError("window '" + s + "' is empty");
    return {a, b};
}

// ---- hashing and the cache

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &n, EVP_sha256(), nullptr)) throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < n; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const fs::path& p, const std::string& data) {
    fs::path tmp = p;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << data;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, p);
}

class DirLock {
public:
    DirLock(const fs::path& dir, int how) {
        fd_ = ::open((dir / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0) throw std::runtime_error("cannot open lock in " + dir.string());
        ::flock(fd_, how);
    }
    ~DirLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    int fd_ = -1;
};

std::string key_of(const Profile& p) {
    std::string k;
    for (char c : p.name())
        if (std::isalnum(static_cast<unsigned char>(c))) k += c;
    return k;
}

}  // namespace

Cache::Cache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path Cache::default_dir() {
    if (const char* e = std::getenv("EXT_FORGE_CACHE"); e && *e) return e;
    return ".ext-forge-cache";
}

Cache::Result Cache::resolve(const Profile& p, int max_s, int max_t, bool force, int jobs) {
    if (max_s <= 0 || max_t <= 0) throw UsageError("resolution bounds must be positive");
    const std::string alg = key_of(p);
    Result r;
    if (!force) {
        DirLock lock(dir_, LOCK_SH);
        // smallest cached entry covering the request
        std::optional<std::pair<long, fs::path>> best;
        for (const auto& e : fs::directory_iterator(dir_)) {
            const auto name = e.path().filename().string();
            if (name.rfind("res-" + alg + "-", 0) != 0 || e.path().extension() != ".manifest") continue;
            nlohmann::json m;
            try {
                m = nlohmann::json::parse(read_file(e.path()));
            } catch (const std::exception&) {
                throw CacheCorrupt("unreadable manifest " + e.path().string() + " (use --force to recompute)");
            }
            if (m.value("algebra", "") != p.name() || m.value("max_s", 0) < max_s || m.value("max_t", 0) < max_t)
                continue;
            long size = static_cast<long>(m.value("max_s", 0)) * m.value("max_t", 0);
            if (!best || size < best->first) best = {size, e.path()};
        }
        if (best) {
            auto manifest = nlohmann::json::parse(read_file(best->second));
            fs::path payload = dir_ / manifest.value("payload", "");
            std::string data;
            try {
                data = read_file(payload);
            } catch (const std::exception&) {
                throw CacheCorrupt("missing payload for " + best->second.string() + " (use --force to recompute)");
            }
            if (manifest.value("format_version", 0) != kFormatVersion ||
                manifest.value("producer", "") != std::string(kProducer))
                throw CacheCorrupt("cache entry " + payload.string() + " was written by another producer or format");
            if (sha256_hex(data) != manifest.value("sha256", ""))
                throw CacheCorrupt("hash mismatch for " + payload.string() + " (use --force to recompute)");
            try {
                r.resolution = load_resolution(nlohmann::json::parse(data));
            } catch (const std::exception& e) {
                throw CacheCorrupt("cannot load " + payload.string() + ": " + e.what());
            }
            r.hit = true;
            r.payload = payload;
            r.manifest = manifest;
            return r;
        }
    }
    r.resolution = minimal_resolution(p, max_s, max_t, jobs);
    std::string stem = "res-" + alg + "-s" + std::to_string(max_s) + "-t" + std::to_string(max_t);
    std::string data = dump_resolution(*r.resolution).dump();
    nlohmann::json m{{"format_version", kFormatVersion},
                     {"producer", kProducer},
                     {"algebra", p.name()},
                     {"max_s", max_s},
                     {"max_t", max_t},
                     {"payload", stem + ".json"},
                     {"sha256", sha256_hex(data)},
                     // cell objects derived from a cached resolution always use these choices
                     {"self_maps",
                      {{{"object", "h8"}, {"attaching", "h0^3"}, {"s", 3}, {"t", 3}},
                       {{"object", "h8v18"}, {"self_map", "v1^8"}, {"s", 8}, {"t", 24}, {"rule", "canonical"}}}}};
    {
        DirLock lock(dir_, LOCK_EX);
        write_atomic(dir_ / (stem + ".json"), data);
        write_atomic(dir_ / (stem + ".manifest"), m.dump(2) + "\n");
    }
    r.payload = dir_ / (stem + ".json");
    r.manifest = m;
    return r;
}

// ---- commands

namespace {

struct Common {
    std::string algebra = "A2";
    std::optional<int> max_s, max_t;
    std::string cache_dir;
    bool force = false;
    bool no_cache = false;
    int jobs = 1;
};

void add_common(CLI::App* c, Common& o) {
    c->add_option("--algebra", o.algebra, "A0, A1, A2, A3 or A");
    c->add_option("--max-s", o.max_s, "resolution length");
    c->add_option("--max-t", o.max_t, "largest internal degree");
    c->add_option("--cache-dir", o.cache_dir, "cache directory (default $EXT_FORGE_CACHE or ./.ext-forge-cache)");
    c->add_flag("--force", o.force, "recompute even when a cache entry exists");
    c->add_flag("--no-cache", o.no_cache, "neither read nor write the cache");
    c->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

std::shared_ptr<FreeResolution> resolution_for(const Common& o, const Profile& p, int s, int t, std::ostream& err) {
    if (o.no_cache) return minimal_resolution(p, s, t, o.jobs);
    Cache cache(o.cache_dir.empty() ? Cache::default_dir() : fs::path(o.cache_dir));
    auto r = cache.resolve(p, s, t, o.force, o.jobs);
    err << (r.hit ? "cache hit: " : "computed: ") << r.payload.string() << "\n";
    return r.resolution;
}

int cmd_resolve(const Common& o, const std::vector<std::string>& pos, std::ostream& out, std::ostream& err) {
    std::string alg = o.algebra;
    std::optional<int> s = o.max_s, t = o.max_t;
    if (pos.size() > 3) throw UsageError("resolve takes at most: algebra max_s max_t");
    auto as_int = [](const std::string& x) {
        try {
            std::size_t used = 0;
            int v = std::stoi(x, &used);
            if (used != x.size()) throw std::invalid_argument(x);
            return v;
        } catch (const std::exception&) {
            throw UsageError("expected an integer, got '" + x + "'");
        }
    };
    if (pos.size() >= 1) alg = pos[0];
    if (pos.size() >= 2) s = as_int(pos[1]);
    if (pos.size() >= 3) t = as_int(pos[2]);
    Profile p = parse_algebra(alg);
    if (!s || !t) throw UsageError("resolve needs --max-s and --max-t");
    if (*s <= 0 || *t <= 0) throw UsageError("bounds must be positive");
    Common c = o;
    c.no_cache = false;
    auto P = resolution_for(c, p, *s, *t, err);
    std::size_t gens = 0;
    for (int i = 0; i <= *s; ++i)
        for (int d = 0; d <= *t; ++d) gens += P->generators(i, d);
    out << p.name() << " resolved through s = " << *s << ", t = " << *t << ": " << gens << " generators\n";
    return 0;
}

struct ExtOpts {
    std::string descriptor;
    std::string window;
    std::optional<int> max_stem;
    std::string format = "tsv";
    bool svg = false;
    std::string output;
};

int cmd_ext(const Common& o, const ExtOpts& e, std::ostream& out, std::ostream& err) {
    Profile p = parse_algebra(o.algebra);
    Coefficients co = parse_descriptor(e.descriptor, p);
    int lo = 0, hi = 40;
    if (!e.window.empty()) std::tie(lo, hi) = parse_range(e.window);
    if (e.max_stem) {
        if (!e.window.empty()) throw UsageError("give either --window or --max-stem");
        if (*e.max_stem < 0) throw UsageError("--max-stem must be non-negative");
        lo = 0;
        hi = *e.max_stem;
    }
    std::string format = e.svg ? "svg" : e.format;
    if (format != "tsv" && format != "svg" && format != "json" && format != "text")
        throw UsageError("unknown format '" + format + "'");

    int max_s = o.max_s.value_or(std::max(12, hi / 4 + 8));
    int top = co.module.dim() ? co.module.max_degree() : 0;
    int bottom = co.module.dim() ? co.module.min_degree() : 0;
    int need_t = hi + max_s + 1 - bottom;
    int max_t = o.max_t.value_or(need_t);
    if (max_t < need_t)
        throw UsageError("window up to stem " + std::to_string(hi) + " at s < " + std::to_string(max_s) +
                         " needs --max-t >= " + std::to_string(need_t));
    (void)top;

    auto P = resolution_for(o, p, max_s, max_t, err);
    ChartOptions opt;
    opt.window = {0, max_s, 0, max_t, lo, hi};
    opt.jobs = o.jobs;
    opt.coefficients = co.text;
    opt.index_suffix = co.index_suffix;
    ExtChart chart;
    if (co.cells == Coefficients::Cells::None) {
        chart = ext_module(*P, co.module, opt);
    } else {
        ChartOptions fo = opt;
        fo.window.stem_min.reset();
        fo.window.stem_max.reset();
        auto f2 = ext_f2(*P, fo);
        auto h8 = build_h8(*P, f2);
        if (co.cells == Coefficients::Cells::H8) {
            chart = ext_cell(h8.complex, co.module, opt);
        } else {
            auto v = build_h8v18(*P, f2, h8);
            chart = ext_cell(v.complex, co.module, opt);
        }
    }
    chart.coefficients = co.text;
    chart.index_suffix = co.index_suffix;

    std::string doc;
    if (format == "tsv") doc = render_tsv(chart);
    else if (format == "json") doc = chart_json(chart).dump(1) + "\n";
    else if (format == "text") doc = render_text(chart, lo, hi, 0, std::max(0, chart.valid_s));
    else {
        ChartStyle st;
        st.stem_min = lo;
        st.stem_max = hi;
        st.s_min = 0;
        st.s_max = std::max(0, chart.valid_s);
        doc = render_svg(chart, st);
    }
    if (e.output.empty()) {
        out << doc;
    } else {
        std::ofstream f(e.output, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + e.output);
        f << doc;
        err << "wrote " << e.output << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& suite, bool fallback, const std::string& format, std::ostream& out,
               std::ostream& err) {
    const auto& names = suite_names();
    std::vector<std::string> todo;
    if (suite == "all") todo = names;
    else if (std::find(names.begin(), names.end(), suite) != names.end()) todo = {suite};
    else throw UsageError("unknown suite '" + suite + "'");
    bool ok = true;
    auto all = nlohmann::json::array();
    for (const auto& name : todo) {
        auto t0 = std::chrono::steady_clock::now();
        Report r = run_suite(name, fallback);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && r.ok;
        if (format == "text") {
            out << (r.ok ? "PASS " : "FAIL ") << name << "\n";
            for (const auto& l : r.lines) out << "  " << l << "\n";
        } else {
            all.push_back(report_json(name, r, secs));
        }
        err << name << ": " << (r.ok ? "pass" : "FAIL") << "\n";
    }
    if (format != "text") out << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
    return ok ? 0 : 1;
}

std::vector<int> parse_index(const std::string& s) {
    std::vector<int> I;
    std::stringstream ss(s);
    for (std::string x; std::getline(ss, x, ',');) {
        try {
            std::size_t used = 0;
            int v = std::stoi(x, &used);
            if (used != x.size() || v < 0) throw std::invalid_argument(x);
            I.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("bad index '" + s + "': expected i or i1,i2,...");
        }
    }
    if (I.empty()) throw UsageError("empty index");
    return I;
}

struct BgOpts {
    std::string index;
    std::string window;
    std::string s_range = "0..64";
    std::optional<int> line;
    std::string format = "text";
};

int cmd_bgpoly(const BgOpts& b, std::ostream& out) {
    auto [lo, hi] = b.window.empty() ? std::pair<int, int>{0, 1 << 20} : parse_range(b.window);
    auto [slo, shi] = parse_range(b.s_range);
    // command-line ranges are inclusive, E1 windows half-open
    E1Window w{lo, hi + 1, slo, shi + 1};
    if (b.line) {
        if (*b.line < 1) throw UsageError("--line must be positive");
        if (b.window.empty()) throw UsageError("--line needs --window");
        auto e = e1_window(*b.line, w);
        if (b.format == "json") {
            out << to_json(e).dump(1) << "\n";
            return 0;
        }
        for (const auto& x : e) {
            out << "I = (";
            for (std::size_t i = 0; i < x.I.size(); ++i) out << (i ? "," : "") << x.I[i];
            out << "): " << x.summands.kept.size() << " summands in range, " << x.summands.below_window.size()
                << " cut\n";
            for (const auto& a : x.audit) out << "  " << a << "\n";
        }
        return 0;
    }
    if (b.index.empty()) throw UsageError("bgpoly needs an index");
    auto I = parse_index(b.index);
    if (I.size() > 1)
        for (int i : I)
            if (i == 0) throw UsageError("multi-index entries must be positive");
    BGPolynomial f = I.size() == 1 ? bg_f(I[0]) : bg_f_multi(I);
    if (b.format == "json") {
        nlohmann::json j{{"I", I}, {"polynomial", f.to_string()}, {"terms", f.to_json()}};
        if (I.size() > 1 || I[0] > 0) j["summands"] = enumerate_summands(I, w).to_json();
        out << j.dump(1) << "\n";
        return 0;
    }
    out << f.to_string() << "\n";
    if (I.size() == 1 && I[0] == 0) return 0;
    auto list = enumerate_summands(I, w);
    for (const auto& d : list.kept)
        out << "  " << d.multiplicity << " x S^" << d.suspension << " bo1^" << d.tensor_power << "[-" << d.shift
            << "]  (E1 suspension " << d.e1_suspension << ", bottom (" << d.bottom_stem << "," << d.bottom_s << "))\n";
    if (!list.below_window.empty()) out << "  " << list.below_window.size() << " summands outside the window\n";
    for (const auto& a : list.a1_terms) out << "  A(1) residue: " << a.note << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ext charts over sub-Hopf algebras of the mod 2 Steenrod algebra", "ext-forge"};
    app.require_subcommand(1);
    Common common;

    auto* res = app.add_subcommand("resolve", "compute or load a minimal resolution");
    add_common(res, common);
    std::vector<std::string> res_pos;
    res->add_option("args", res_pos, "algebra max_s max_t");

    auto* ext = app.add_subcommand("ext", "Ext chart of a coefficient expression");
    add_common(ext, common);
    ExtOpts eo;
    ext->add_option("descriptor", eo.descriptor, "coefficients, e.g. \"bo:1 ⊗ h8v18\"")->required();
    ext->add_option("--window", eo.window, "stems a..b");
    ext->add_option("--max-stem", eo.max_stem, "stems 0..N");
    ext->add_option("--format", eo.format, "tsv, svg, json or text");
    ext->add_flag("--svg", eo.svg, "same as --format svg");
    ext->add_option("-o,--output", eo.output, "write here instead of stdout");

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite, vformat = "json";
    bool fallback = false;
    ver->add_option("suite", suite, "oracle, splitting, bo-sequences, bg-lemma, vanishing-windows, les, ... or all")
        ->required();
    ver->add_flag("--fallback", fallback, "reduced window for vanishing-windows");
    ver->add_option("--format", vformat, "json or text");

    auto* bg = app.add_subcommand("bgpoly", "Brown-Gitler polynomial and its summands");
    BgOpts bo_opts;
    bg->add_option("index", bo_opts.index, "i or i1,i2,...");
    bg->add_option("--window", bo_opts.window, "stems a..b");
    bg->add_option("--s-range", bo_opts.s_range, "filtrations a..b");
    bg->add_option("--line", bo_opts.line, "list the E1 line n inside --window");
    bg->add_option("--format", bo_opts.format, "text or json");

    std::vector<std::string> argv_s{"ext-forge"};
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_s) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        for (auto* sub : app.get_subcommands()) out << sub->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*res) return cmd_resolve(common, res_pos, out, err);
        if (*ext) return cmd_ext(common, eo, out, err);
        if (*ver) {
            if (vformat != "json" && vformat != "text") throw UsageError("unknown format '" + vformat + "'");
            return cmd_verify(suite, fallback, vformat, out, err);
        }
        if (*bg) return cmd_bgpoly(bo_opts, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const CacheCorrupt& e) {
        err << "corrupt cache: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace extforge::cli
