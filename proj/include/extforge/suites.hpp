#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "extforge/comod.hpp"

// Named verification suites, shared by the CLI and the acceptance runner.
namespace extforge {

// engine against the injective-resolution Cotor, A(1) and A(2), trivial and
// bo_1 coefficients, s <= 6 and t - s <= 12
Report suite_oracle();
// Ext_{A(2)}(F2) for t - s <= 30: level-1 generators, h0-towers, h0^3-torsion
Report suite_ext_a2();
// cells of H(8), H(8, v1^8) and of the tensor square of the latter
Report suite_cells();
// the exact sequence of the cone on h0^3, every bidegree with t - s <= max_stem
Report suite_les(int max_stem = 60);
// dim Ext^{8,56}(H(8)) = 1 and Ext^{7,56}(Abar (x) H(8)) = 0 through the bo_i
Report suite_v2_8_window();
Report suite_vanishing_windows(bool fallback = false);
Report suite_bg_lemma(int max_i = 128);
Report suite_splitting(int max_degree = 48);
Report suite_bo_sequences(const std::vector<int>& js = {1, 2, 3});
Report suite_vanishing_line();
// full A, t <= 30
Report suite_full_a();
// TSV and JSON of charts under permuted bases and different job counts
Report suite_determinism(int jobs = 4);

// names accepted by run_suite
const std::vector<std::string>& suite_names();
Report run_suite(const std::string& name, bool fallback = false);
nlohmann::json report_json(const std::string& suite, const Report& r, double seconds);

}  // namespace extforge
