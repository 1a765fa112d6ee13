#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace extforge {

// sum of a * s^k t^l x^m with non-negative integer a; keys are {k, l, m}
class BGPolynomial {
public:
    using Key = std::array<int, 3>;

    BGPolynomial() = default;
    static BGPolynomial one() { return monomial(0, 0, 0); }
    static BGPolynomial monomial(int k, int l, int m, std::uint64_t a = 1);

    const std::map<Key, std::uint64_t>& terms() const { return c_; }
    std::uint64_t coefficient(int k, int l, int m) const;
    bool is_zero() const { return c_.empty(); }
    int max_power(int var) const;  // 0 = s, 1 = t, 2 = x
    std::uint64_t value_at_one() const;

    BGPolynomial& operator+=(const BGPolynomial& o);
    friend BGPolynomial operator+(BGPolynomial a, const BGPolynomial& b) { return a += b; }
    friend BGPolynomial operator*(const BGPolynomial& a, const BGPolynomial& b);
    bool operator==(const BGPolynomial& o) const { return c_ == o.c_; }

    // "t x + s t^2": terms by rising power of s, then falling power of x
    std::string to_string() const;
    nlohmann::json to_json() const;

private:
    std::map<Key, std::uint64_t> c_;
};

BGPolynomial bg_f(int i);
BGPolynomial bg_f_multi(const std::vector<int>& I);

struct LemmaReport {
    int i = 0;
    std::array<bool, 4> items{};
    std::vector<std::string> notes;
    bool ok() const { return items[0] && items[1] && items[2] && items[3]; }
};
LemmaReport check_lemma(int i);

// Stems and filtrations are both half-open: [stem_lo, stem_hi) x [s_lo, s_hi)
struct E1Window {
    int stem_lo = 0, stem_hi = 0;
    int s_lo = 0, s_hi = 0;
};

// one monomial s^k t^l x^m of f_I: the summand Sigma^{8l+k} bo_1^{(x)m}[-k] (x) M
struct SummandDescriptor {
    int suspension = 0;     // 8l + k
    int e1_suspension = 0;  // plus 8|I| when the summand sits in the resolution
    int tensor_power = 0;   // m
    int shift = 0;          // k
    std::uint64_t multiplicity = 0;
    // lowest (stem, s) the summand can reach with the given cells of M
    int bottom_stem = 0, bottom_s = 0;
};

// Ext_{A(1)}(tmf_j (x) ...) residue of one recursion step
struct A1Residual {
    std::size_t factor = 0;  // position in I
    int index = 0;           // bo index of the factor being split
    int tmf_index = 0;       // j - 1
    int suspension = 0;      // outer suspension carried along the recursion
    int shift = 0;
    std::string note;
};

struct SummandList {
    std::vector<int> I;
    std::vector<SummandDescriptor> kept;
    std::vector<SummandDescriptor> below_window;  // cut by connectivity
    std::vector<A1Residual> a1_terms;
    std::uint64_t total() const;  // kept plus cut multiplicities
    nlohmann::json to_json() const;
};

// cells of M as (stem, s); the window is in Ext^{s,t}(Sigma^{8|I|} bo_I (x) M)
// coordinates
SummandList enumerate_summands(const std::vector<int>& I, const E1Window& w,
                               const std::vector<std::pair<int, int>>& cells = {{0, 0}});

// the A(1)-residual line for H(8, v1^8): true exactly when 7s > (t - s) + 51
bool a1_vanishing_filter(int t_minus_s, int s);

struct E1Entry {
    std::vector<int> I;
    SummandList summands;
    // A(1) residues: dropped when the whole window lies above the line, else flagged
    std::vector<std::string> audit;
};
// multi-indices of length n with 8|I| + bottom cell inside the window; the
// A(1) line is applied in abutment coordinates (stem - n, s + n)
std::vector<E1Entry> e1_window(int n, const E1Window& w, const std::vector<std::pair<int, int>>& cells = {{0, 0}},
                               bool apply_a1_line = true);
nlohmann::json to_json(const std::vector<E1Entry>& e);

// target of a d_r from a class on the 0-line at (stem, s) into the summand
// Ext(bo_I (x) M) on line r = n, in unsuspended coordinates
std::pair<int, int> differential_target(int stem, int s, int n, int weight);

}  // namespace extforge
