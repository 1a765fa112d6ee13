#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "extforge/resolve.hpp"

namespace extforge::cli {

inline constexpr const char* kProducer = "ext-forge 0.1.0";
inline constexpr int kFormatVersion = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CacheCorrupt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coefficient expressions:
//   expr  := term (("⊗" | "(x)" | "tensor" | "*") term)*
//   term  := ("S^" | "Sigma^") int term | "(" expr ")" | atom
//   atom  := f2 | h8 | h8v18 | bo:i | tmfbg:j | abar:N | a2qa1
// h8 and h8v18 are cell objects; at most one may appear.
struct Coefficients {
    enum class Cells { None, H8, H8V18 };
    Cells cells = Cells::None;
    FiniteModule module;
    std::string text;          // normalized
    std::string index_suffix;  // "(i1,...,in)" when the module is a tensor of bo_i's
};
Coefficients parse_descriptor(const std::string& s, const Profile& p);

// "A(2)", "A2", "a2", "A" -> profile; throws UsageError
Profile parse_algebra(const std::string& s);
// "96..144" -> inclusive stems
std::pair<int, int> parse_range(const std::string& s);

std::string sha256_hex(const std::string& data);

// resolutions keyed by algebra and bounds, one JSON payload plus a manifest
// sidecar each; writes hold an advisory lock on the directory
class Cache {
public:
    explicit Cache(std::filesystem::path dir);
    const std::filesystem::path& dir() const { return dir_; }

    struct Result {
        std::shared_ptr<FreeResolution> resolution;
        bool hit = false;
        std::filesystem::path payload;
        nlohmann::json manifest;
    };
    // a cached entry covering the bounds is reused; a corrupt one throws
    // CacheCorrupt unless force is set, in which case it is recomputed
    Result resolve(const Profile& p, int max_s, int max_t, bool force, int jobs);

    static std::filesystem::path default_dir();

private:
    std::filesystem::path dir_;
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace extforge::cli
