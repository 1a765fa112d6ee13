#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "extforge/gf2.hpp"

namespace extforge {

// Exponent sequence r_1..r_k of a Milnor basis element Sq(R), or e_1..e_k of a
// dual monomial xi_1^{e_1}...xi_k^{e_k}. Trailing zeros are always trimmed.
using Exponents = std::vector<int>;

void trim(Exponents& r);
int milnor_degree(const Exponents& r);
int dual_weight(const Exponents& e);
// length-then-lexicographic
bool canonical_less(const Exponents& a, const Exponents& b);
std::string format_sq(const Exponents& r);

struct Profile {
    std::vector<int> exponents;  // empty: the whole Steenrod algebra

    static Profile A(int n);
    static Profile full() { return {}; }
    static Profile parse(const std::string& name);  // "A0".."A3", "A"

    bool is_full() const { return exponents.empty(); }
    // number of admissible values of r_i is 2^bound; -1 means unbounded
    int bound(std::size_t i) const;
    bool admits(const Exponents& r) const;
    bool contains(const Profile& small) const;
    int top_degree() const;  // -1 for the full algebra
    std::size_t dimension() const;  // 0 for the full algebra
    std::string name() const;

    bool operator==(const Profile& o) const { return exponents == o.exponents; }
    bool operator!=(const Profile& o) const { return !(*this == o); }
};

struct MilnorElement {
    std::vector<Exponents> terms;  // canonical order, no repeats

    MilnorElement() = default;
    explicit MilnorElement(std::vector<Exponents> t);
    static MilnorElement sq(Exponents r) { return MilnorElement({std::move(r)}); }
    static MilnorElement unit() { return MilnorElement({Exponents{}}); }

    bool is_zero() const { return terms.empty(); }
    int degree() const;  // -1 for zero
    MilnorElement& operator+=(const MilnorElement& o);
    bool operator==(const MilnorElement& o) const { return terms == o.terms; }
    std::string to_string() const;
};

std::vector<Exponents> basis_in_degree(const Profile& p, int n);
// raw Milnor-matrix product, no tables
MilnorElement milnor_product(const MilnorElement& a, const MilnorElement& b);
MilnorElement milnor_product(const Exponents& r, const Exponents& s);
std::vector<std::pair<Exponents, Exponents>> coproduct(const Exponents& r);
bool dual_pairing(const Exponents& sq, const Exponents& xi);

// Graded algebra with memoized degree bases and product blocks. Bases up to a
// degree bound are materialized by prepare(); product blocks are built lazily
// and are safe to request from several threads.
class Algebra {
public:
    explicit Algebra(Profile p, int max_degree = 0);
    Algebra(const Algebra&) = delete;
    Algebra& operator=(const Algebra&) = delete;

    const Profile& profile() const { return profile_; }
    void prepare(int max_degree);
    int prepared_degree() const { return prepared_; }

    std::size_t dim(int n) const;
    const std::vector<Exponents>& basis(int n) const;
    // index of Sq(r) in basis(milnor_degree(r)); -1 if not present
    int index_of(const Exponents& r) const;

    // product of basis(a)[i] and basis(b)[j] as sorted indices into basis(a+b)
    const std::vector<int>& product(int a, int i, int b, int j) const;
    // x in degree a, y in degree b, both as coordinate vectors
    BitVec multiply(int a, const BitVec& x, int b, const BitVec& y) const;

    BitVec to_vector(const MilnorElement& x) const;
    MilnorElement to_element(int degree, const BitVec& v) const;

    // the conjugation; only used to turn right actions into left ones
    const BitVec& conjugate(int a, int i) const;

    // basis elements Sq(2^k) that exist in this algebra up to the prepared degree
    std::vector<Exponents> generators() const;

private:
    struct Block {
        std::once_flag once;
        std::vector<std::vector<int>> cells;  // i * dim(b) + j
    };
    Block& block(int a, int b) const;

    Profile profile_;
    int prepared_ = -1;
    mutable std::mutex mu_;
    std::deque<std::vector<Exponents>> bases_;
    std::map<Exponents, int> index_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<Block>> blocks_;
    mutable std::map<std::pair<int, int>, BitVec> conj_;
};

}  // namespace extforge
