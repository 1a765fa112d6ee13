#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "extforge/gf2.hpp"
#include "extforge/hopf.hpp"

namespace extforge {

// One shared, fully prepared Algebra per finite profile (the full algebra is
// prepared to at least `degree`).
std::shared_ptr<const Algebra> shared_algebra(const Profile& p, int degree = 0);

struct BasisElement {
    std::string label;
    int degree = 0;
    std::optional<int> weight;
};

using PoincareSeries = std::map<int, long>;

PoincareSeries shift(const PoincareSeries& p, int k);
PoincareSeries add(const PoincareSeries& a, const PoincareSeries& b);
PoincareSeries multiply(const PoincareSeries& a, const PoincareSeries& b);
PoincareSeries truncate(const PoincareSeries& p, int max_degree);

// A finite graded module over a sub-Hopf algebra of A. The basis is the basis
// of a comodule over the dual; an element Sq(R) of the algebra acts by
// lowering degree by |Sq(R)|: Sq(R).n is the sum of the n' for which n' (x) xi^R
// occurs in the coaction of n. Every algebra basis element has a stored action,
// kept as blocks between degrees.
class FiniteModule {
public:
    FiniteModule() = default;
    FiniteModule(Profile p, std::vector<BasisElement> basis);

    const Profile& profile() const { return profile_; }
    const Algebra& algebra() const { return *alg_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BasisElement>& basis() const { return basis_; }
    int min_degree() const { return lo_; }
    int max_degree() const { return hi_; }
    // indices of basis elements in degree d
    const std::vector<int>& in_degree(int d) const;
    std::size_t dim_in_degree(int d) const { return in_degree(d).size(); }
    // position of basis element k inside in_degree(degree(k))
    int local_index(int k) const { return local_[k]; }
    PoincareSeries poincare() const;

    // action of the algebra basis element (a, i) from degree d to d - a;
    // rows index in_degree(d - a), columns index in_degree(d); null when zero
    const BitMatrix* block(int a, int i, int d) const;
    // the same action as a dim x dim matrix in basis order
    BitMatrix action(int a, int i) const;
    BitMatrix action(const Exponents& r) const;
    void set_action(int a, int i, const BitMatrix& full);

    // every relation x.(y.m) = (xy).m, for all pairs of algebra basis elements
    bool is_valid(std::string* why = nullptr) const;

    std::string name;
    // Ext computed from a truncation agrees with the untruncated one in stems below this
    std::optional<int> valid_below;
    int dual_shift = 0;  // set by dualize

private:
    void index();

    Profile profile_;
    std::shared_ptr<const Algebra> alg_;
    std::vector<BasisElement> basis_;
    int lo_ = 0, hi_ = -1;
    std::vector<std::vector<int>> by_degree_;
    std::vector<int> local_;
    // blocks_[a][i][d - lo_]
    std::vector<std::vector<std::vector<std::optional<BitMatrix>>>> blocks_;
};

FiniteModule trivial(const Profile& p = Profile::A(2));
FiniteModule suspend(const FiniteModule& m, int k);
FiniteModule direct_sum(const FiniteModule& m, const FiniteModule& n);
FiniteModule tensor(const FiniteModule& m, const FiniteModule& n);
FiniteModule dualize(const FiniteModule& m);
// reorders the basis (new position k holds old element perm[k]) and relabels
FiniteModule permute_basis(const FiniteModule& m, const std::vector<int>& perm, const std::string& label_prefix = "");
// actions of the Sq(2^k) only; all other basis elements are derived
FiniteModule from_generator_actions(const Profile& p, std::vector<BasisElement> basis,
                                    const std::map<int, BitMatrix>& gens);

// Spans of dual monomials inside A_* (or a finite quotient of it) closed
// under the right coaction. The acting algebra records the coaction projected
// to its dual.
struct MonomialFilter {
    Profile acting = Profile::A(2);
    Profile ambient = Profile::full();
    std::vector<int> divisibility;  // e_k divisible by 2^divisibility[k-1]
    std::optional<int> max_weight;
    std::optional<int> max_degree;
    bool drop_unit = false;
};
std::vector<Exponents> filtered_monomials(const MonomialFilter& f);
FiniteModule monomial_module(const MonomialFilter& f, const std::string& name);

// right coaction of xi^e with the right factor projected to `acting` and the
// left factor projected to `ambient`; pairs (left, right)
std::vector<std::pair<Exponents, Exponents>> dual_coaction(const Exponents& e, const Profile& acting,
                                                           const Profile& ambient);
std::string monomial_label(const Exponents& e);

FiniteModule bo(int i, const Profile& acting = Profile::A(2));
FiniteModule tmf_bg(int j, const Profile& acting = Profile::A(2));
FiniteModule quotient_hopf_module(const Profile& big, const Profile& small);
FiniteModule abar_truncation(int max_degree, int margin = 0, const Profile& acting = Profile::A(2));

PoincareSeries bo_series(int i);
PoincareSeries tmf_series(int j);

struct Report {
    bool ok = true;
    std::vector<std::string> lines;
    void fail(const std::string& s) { ok = false; lines.push_back("FAIL " + s); }
    void note(const std::string& s) { lines.push_back(s); }
};

Report verify_splitting(int max_degree);
Report verify_bo_sequence(int j);
// weights never increase under the action
bool preserves_weight_filtration(const FiniteModule& m);

nlohmann::json dump_module(const FiniteModule& m);
FiniteModule load_module(const nlohmann::json& j);

}  // namespace extforge
