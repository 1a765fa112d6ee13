#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

// Potential targets of algebraic tmf-resolution differentials on four classes
// of Ext_{A(2)}(H(8, v1^8)), checked against computed Ext groups.
namespace extforge {

struct VanishingSource {
    std::string name;
    int stem = 0, s = 0;
};

// nu^2[18], epsilon[18], kappa[18], kbar eta^2[18] with v2^16 attached;
// `down` divides by v2^8 that many times, (-48, -8) each
std::vector<VanishingSource> vanishing_sources(int down = 0);

struct TargetCheck {
    std::string source;
    std::vector<int> I;  // bo indices of the term
    int stem = 0, s = 0;  // in Ext(bo_I (x) H(8, v1^8)), unsuspended
    std::string method;   // "direct", "cell filtration", "summands"
    bool in_range = true;
    std::size_t dim = 0;  // total of the groups that could carry the target
    std::size_t expected = 0;
    std::string note;
    bool ok() const { return !in_range || dim == expected; }
};

struct VanishingOptions {
    bool fallback = false;    // sources divided by v2^8, every group with t <= 90
    bool other_terms = true;  // multi-indices other than (1, ..., 1)
    int jobs = 1;
};

struct VanishingReport {
    bool fallback = false;
    int max_s = 0, max_t = 0;
    std::vector<VanishingSource> sources;
    std::vector<std::size_t> source_dims;
    std::vector<TargetCheck> edge;    // bo_1^{(x)k}, k = 1, 2, 3, computed directly
    std::vector<TargetCheck> beyond;  // bo_1^{(x)k}, k >= 4
    std::vector<TargetCheck> other;   // remaining I through the summand splitting
    std::size_t a1_dropped = 0;       // A(1) residues above the line
    std::size_t a1_flagged = 0;
    bool edge_ok() const;
    bool beyond_ok() const;
    bool other_ok() const;
    bool sources_ok() const;
    bool ok() const { return sources_ok() && edge_ok() && beyond_ok(); }
    std::vector<std::string> lines() const;
    nlohmann::json to_json() const;
};

VanishingReport vanishing_windows(const VanishingOptions& opt = {});

}  // namespace extforge
