#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "extforge/charts.hpp"
#include "extforge/cli.hpp"

namespace fs = std::filesystem;
using namespace extforge;
using namespace extforge::cli;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ext-forge-test-" + std::to_string(::getpid()) + "-" +
                                            std::to_string(counter()++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

struct Run {
    int code;
    std::string out, err;
};
Run invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("descriptors: atoms and tensors") {
    auto p = Profile::A(2);
    auto c = parse_descriptor("bo:1 ⊗ h8v18", p);
    CHECK(c.cells == Coefficients::Cells::H8V18);
    CHECK(c.module.dim() == bo(1, p).dim());
    CHECK(c.index_suffix == "(1)");
    CHECK(c.text == "bo:1 ⊗ h8v18");

    auto d = parse_descriptor("bo:1 (x) bo:2", p);
    CHECK(d.cells == Coefficients::Cells::None);
    CHECK(d.module.dim() == bo(1, p).dim() * bo(2, p).dim());
    CHECK(d.index_suffix == "(1,2)");

    auto e = parse_descriptor("S^8 (bo:1 * bo:1)", p);
    CHECK(e.module.min_degree() == 8);
    CHECK(e.index_suffix.empty());

    CHECK(parse_descriptor("f2", p).module.dim() == 1);
    CHECK(parse_descriptor("  H8 ", p).cells == Coefficients::Cells::H8);
    CHECK(parse_descriptor("a2qa1", p).module.dim() == 8);
    CHECK(parse_descriptor("tmfbg:1 tensor f2", p).module.dim() == tmf_bg(1, p).dim());
}

TEST_CASE("descriptors: errors") {
    auto p = Profile::A(2);
    CHECK_THROWS_AS(parse_descriptor("", p), UsageError);
    CHECK_THROWS_AS(parse_descriptor("bo", p), UsageError);
    CHECK_THROWS_AS(parse_descriptor("bo:-1", p), UsageError);
    CHECK_THROWS_AS(parse_descriptor("h8 ⊗ h8v18", p), UsageError);
    CHECK_THROWS_AS(parse_descriptor("(bo:1", p), UsageError);
    CHECK_THROWS_AS(parse_descriptor("bo:1 junk", p), UsageError);
    CHECK_THROWS_AS(parse_descriptor("a2qa1", Profile::A(1)), UsageError);
}

TEST_CASE("algebra names and ranges") {
    CHECK(parse_algebra("A(2)") == Profile::A(2));
    CHECK(parse_algebra("a1") == Profile::A(1));
    CHECK(parse_algebra("A").is_full());
    CHECK_THROWS_AS(parse_algebra("B2"), UsageError);
    CHECK(parse_range("96..144") == std::pair<int, int>{96, 144});
    CHECK_THROWS_AS(parse_range("5..3"), UsageError);
    CHECK_THROWS_AS(parse_range("5-3"), UsageError);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cache: miss, hit, superset reuse, identical charts") {
    TempDir d;
    Cache cache(d.path);
    auto first = cache.resolve(Profile::A(2), 8, 30, false, 1);
    CHECK_FALSE(first.hit);
    CHECK(fs::exists(first.payload));
    CHECK(first.manifest["sha256"] == sha256_hex([&] {
              std::ifstream in(first.payload, std::ios::binary);
              std::ostringstream ss;
              ss << in.rdbuf();
              return ss.str();
          }()));
    CHECK(first.manifest["format_version"] == kFormatVersion);

    auto again = cache.resolve(Profile::A(2), 6, 20, false, 1);
    CHECK(again.hit);
    CHECK(again.payload == first.payload);

    ChartOptions opt;
    opt.window = {0, 6, 0, 26, std::nullopt, std::nullopt};
    auto fresh = render_tsv(ext_f2(*first.resolution, opt));
    auto loaded = render_tsv(ext_f2(*again.resolution, opt));
    CHECK(fresh == loaded);

    // another algebra is a separate entry
    CHECK_FALSE(cache.resolve(Profile::A(1), 6, 20, false, 1).hit);
}

TEST_CASE("cache: corruption is detected and --force recomputes") {
    TempDir d;
    Cache cache(d.path);
    auto r = cache.resolve(Profile::A(1), 5, 20, false, 1);
    {
        std::ofstream out(r.payload, std::ios::app);
        out << " ";
    }
    CHECK_THROWS_AS(cache.resolve(Profile::A(1), 5, 20, false, 1), CacheCorrupt);
    auto f = cache.resolve(Profile::A(1), 5, 20, true, 1);
    CHECK_FALSE(f.hit);
    CHECK(cache.resolve(Profile::A(1), 5, 20, false, 1).hit);
}

TEST_CASE("run: exit codes") {
    TempDir d;
    auto dir = d.path.string();
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"bogus"}).code == 2);
    CHECK(invoke({"verify", "no-such-suite"}).code == 2);
    CHECK(invoke({"ext", "bo:", "--cache-dir", dir}).code == 2);
    CHECK(invoke({"ext", "f2", "--max-stem", "30", "--max-t", "10", "--cache-dir", dir}).code == 2);
    CHECK(invoke({"ext", "f2", "--format", "png", "--cache-dir", dir}).code == 2);
    CHECK(invoke({"resolve", "A9", "4", "10", "--cache-dir", dir}).code == 2);
    CHECK(invoke({"--help"}).code == 0);

    auto ok = invoke({"verify", "bg-lemma"});
    CHECK(ok.code == 0);
    auto j = nlohmann::json::parse(ok.out);
    CHECK(j["suite"] == "bg-lemma");
    CHECK(j["ok"] == true);
}

TEST_CASE("run: resolve reports hit on the second call") {
    TempDir d;
    auto dir = d.path.string();
    auto a = invoke({"resolve", "A1", "6", "24", "--cache-dir", dir});
    CHECK(a.code == 0);
    CHECK(a.err.find("computed") != std::string::npos);
    auto b = invoke({"resolve", "--algebra", "A1", "--max-s", "6", "--max-t", "24", "--cache-dir", dir});
    CHECK(b.code == 0);
    CHECK(b.err.find("cache hit") != std::string::npos);
    CHECK(a.out == b.out);
}

TEST_CASE("run: ext output is the same from cache and fresh") {
    TempDir d;
    auto dir = d.path.string();
    std::vector<std::string> args{"ext", "bo:1", "--algebra", "A1", "--window", "0..12", "--cache-dir", dir};
    auto a = invoke(args);
    auto b = invoke(args);
    REQUIRE(a.code == 0);
    CHECK(b.code == 0);
    CHECK(a.err.find("computed") != std::string::npos);
    CHECK(b.err.find("cache hit") != std::string::npos);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("stem\ts\tdim\tlabels\n", 0) == 0);
    CHECK(a.out.find("x_{0,0}(1)") != std::string::npos);
    // TSV parses back to the same text
    CHECK(render_tsv(parse_tsv(a.out)) == a.out);

    auto svg = invoke({"ext", "h8", "--algebra", "A1", "--max-stem", "10", "--svg", "--cache-dir", dir});
    CHECK(svg.code == 0);
    CHECK(svg.out.find("<svg") != std::string::npos);
    CHECK(svg.out.find("</svg>") != std::string::npos);
}

TEST_CASE("run: bgpoly") {
    auto a = invoke({"bgpoly", "2"});
    CHECK(a.code == 0);
    CHECK(a.out.rfind("t x + s t^2\n", 0) == 0);
    CHECK(a.out.find("S^17 bo1^0[-1]") != std::string::npos);
    CHECK(invoke({"bgpoly", "0"}).out == "1\n");
    auto j = nlohmann::json::parse(invoke({"bgpoly", "3", "--format", "json"}).out);
    CHECK(j["polynomial"] == "t x^2");
    CHECK(invoke({"bgpoly", "x"}).code == 2);
    CHECK(invoke({"bgpoly", "1,0"}).code == 2);
    auto line = invoke({"bgpoly", "--line", "1", "--window", "96..143", "--s-range", "26..29"});
    CHECK(line.code == 0);
    CHECK(line.out.find("I = (") != std::string::npos);
}
