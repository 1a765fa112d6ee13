#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "extforge/gf2.hpp"

// Independent cross-checks. Nothing here uses the Milnor product tables, the
// resolver or the module builders; the dual coalgebra is coded from the
// coproduct formula alone.
namespace extforge {
class FiniteModule;
}

namespace extforge::oracle {

struct BudgetExceeded : std::length_error {
    using std::length_error::length_error;
};

// F2[xi_1, xi_2, ...] / (xi_k^(2^bound_k)), bounds listed from xi_1
class DualAlgebra {
public:
    explicit DualAlgebra(std::vector<int> bounds);

    std::size_t size() const { return mono_.size(); }
    const std::vector<int>& monomial(std::size_t i) const { return mono_[i]; }
    int degree(std::size_t i) const { return deg_[i]; }
    int top_degree() const { return top_; }
    // index of an exponent vector (trailing zeros optional); -1 when it is zero
    // in the quotient
    long index(std::vector<int> e) const;
    const std::vector<std::size_t>& in_degree(int d) const;
    // psi(m) as pairs (left, right), mod 2
    const std::vector<std::pair<std::size_t, std::size_t>>& coproduct(std::size_t i) const { return cop_[i]; }
    std::size_t unit() const { return 0; }

private:
    std::vector<int> bounds_;
    std::vector<std::vector<int>> mono_;
    std::vector<int> deg_;
    std::map<std::vector<int>, std::size_t> idx_;
    std::map<int, std::vector<std::size_t>> by_deg_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cop_;
    int top_ = 0;
};

// right comodule; coaction[e](i, j) is the coefficient of b_i (x) xi^e in psi(b_j)
struct Comodule {
    std::vector<int> degree;
    std::map<std::vector<int>, BitMatrix> coaction;
};

Comodule trivial_comodule();
// reads the stored action tables of a module as a coaction
Comodule comodule_of(const FiniteModule& m);
// exponent bounds of A(n)_*
std::vector<int> dual_bounds(int n);

struct CotorTable {
    int max_s = 0, max_stem = 0;
    std::map<std::pair<int, int>, std::size_t> dims;  // (s, t)
    std::size_t dim(int s, int t) const;
};

// Cotor^{s,t}(M, F2) through a minimal injective resolution by extended
// comodules, degree-truncated at t <= max_stem + max_s
CotorTable cotor(const std::vector<int>& bounds, const Comodule& M, int max_s, int max_stem,
                 std::size_t budget = 1 << 16);

// the reduced cobar complex M (x) Abar^(x)s, one internal degree at a time
class CobarComplex {
public:
    CobarComplex(const std::vector<int>& bounds, const Comodule& M, std::size_t budget = 6000);
    std::size_t dim(int s, int t) const;
    BitMatrix differential(int s, int t) const;  // C^{s,t} -> C^{s+1,t}
    bool check_d_squared(int s, int t) const;
    std::size_t cohomology(int s, int t) const;

private:
    using Word = std::vector<std::size_t>;  // module basis index, then s coalgebra indices
    std::vector<Word> basis(int s, int t) const;
    DualAlgebra G_;
    Comodule M_;
    std::size_t budget_;
};

// Sq^{a_1} ... Sq^{a_k} as a sum of admissible words
using SqWord = std::vector<int>;
bool is_admissible(const SqWord& w);
std::vector<SqWord> adem_straighten(const SqWord& w);
std::vector<SqWord> admissible_basis(int degree, int max_length = 64);

}  // namespace extforge::oracle
