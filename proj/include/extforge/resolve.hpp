#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extforge/comod.hpp"

namespace extforge {

// coeff is a vector over the algebra basis of one degree (the degree of the
// element minus the degree of gen)
struct Term {
    int gen = 0;
    BitVec coeff;
};
using Element = std::vector<Term>;  // sorted by gen, no zero coefficients

void accumulate(Element& acc, const Element& x);

struct Cell {
    std::string label;
    int s = 0;
    int t = 0;
};

struct Generator {
    int degree = 0;
    int cell = 0;
    Element boundary;  // in the level below, same internal degree
};

// A bounded complex of free modules with chosen generators. Levels low..high
// are materialized and hold every generator of degree <= max_t.
class FreeComplex {
public:
    FreeComplex() = default;
    FreeComplex(std::shared_ptr<const Algebra> alg, int low, int high, int max_t);

    const Algebra& algebra() const { return *alg_; }
    std::shared_ptr<const Algebra> algebra_ptr() const { return alg_; }
    const Profile& profile() const { return alg_->profile(); }

    int low() const { return low_; }
    int high() const { return high_; }
    int max_t() const { return max_t_; }
    bool has_level(int n) const { return n >= low_ && n <= high_; }
    const std::vector<Generator>& level(int n) const;
    std::vector<Generator>& level_mut(int n);
    void set_bounds(int high, int max_t);

    std::string name;
    std::vector<Cell> cells;
    // level 0 maps onto F2 by the augmentation; only true for resolutions
    bool augmented = false;

    struct Layout {
        std::vector<int> gens;
        std::vector<std::size_t> offset;
        std::size_t dim = 0;
        std::vector<long> position;  // generator -> index in gens, -1 if absent
    };
    // internal degree d of level n: generators of degree <= d in stored order,
    // each contributing a block indexed by the algebra basis
    Layout layout(int n, int d) const;
    std::size_t dim(int n, int d) const { return layout(n, d).dim; }
    BitVec to_dense(int n, int d, const Element& e) const;
    Element from_dense(int n, int d, const BitVec& v) const;

    // x * e, x of algebra degree a, e in level n and degree d
    Element act(int a, const BitVec& x, int n, int d, const Element& e) const;
    Element boundary(int n, int d, const Element& e) const;
    // columns index layout(n, d), rows index layout(n - 1, d)
    BitMatrix boundary_matrix(int n, int d) const;

    bool check_d_squared(std::string* why = nullptr) const;
    // no boundary coefficient has a degree-0 component
    bool is_minimal() const;

private:
    std::shared_ptr<const Algebra> alg_;
    int low_ = 0, high_ = -1, max_t_ = 0;
    std::vector<std::vector<Generator>> levels_;
};

// C_n (degree d) -> T_{n - shift_s} (degree d - shift_t)
struct ChainMap {
    int shift_s = 0, shift_t = 0;
    int low = 0;  // first source level with stored images
    std::vector<std::vector<Element>> images;
    int high() const { return low + static_cast<int>(images.size()) - 1; }
    const Element& image(int n, int g) const;
};

Element apply(const FreeComplex& target, const FreeComplex& source, const ChainMap& f, int n, int d, const Element& e);
// g after f
ChainMap compose(const FreeComplex& a, const FreeComplex& b, const FreeComplex& c, const ChainMap& f, const ChainMap& g);
ChainMap add_maps(const ChainMap& f, const ChainMap& g);
ChainMap identity_map(const FreeComplex& c);
bool is_chain_map(const FreeComplex& source, const FreeComplex& target, const ChainMap& f, std::string* why = nullptr);

class FreeResolution {
public:
    FreeComplex complex;

    int max_s() const { return complex.high(); }
    int max_t() const { return complex.max_t(); }
    std::size_t generators(int s, int t) const;
    // some x in level m, degree d, with d(x) = y; nullopt when y is no boundary
    std::optional<Element> preimage(int m, int d, const Element& y) const;
    void clear_cache() const;

private:
    struct Solver {
        FreeComplex::Layout cols;
        Echelon ech;
    };
    std::shared_ptr<const Solver> solver(int m, int d) const;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, std::shared_ptr<const Solver>> cache_;
    mutable std::size_t cache_bytes_ = 0;
};

std::shared_ptr<FreeResolution> minimal_resolution(const Profile& p, int max_s, int max_t, int jobs = 1);

// F2-valued cochain at (s0, t0): one bit per generator of level s0 and degree
// t0, in level order. The lift is a chain map C -> P through level `high`.
ChainMap lift_chain_map(const FreeResolution& P, const FreeComplex& C, int s0, int t0, const BitVec& cochain,
                        int high = -1);
// H with dH + HD = G for a chain map G: C -> P that vanishes on Ext
ChainMap null_homotopy(const FreeResolution& P, const FreeComplex& C, const ChainMap& G, int high = -1);

// C_n = X_n + Y_{n - s + 1} shifted by t, where f: X -> Y has shift (s, t)
FreeComplex cone(const FreeComplex& X, const FreeComplex& Y, const ChainMap& f, const std::string& name);
// for C = cone(P, P, phi) and v: P -> P, the self-map (x, y) -> (vx, vy + hx)
// where dh + hd = phi v + v phi
ChainMap extend_over_cone(const FreeResolution& P, const FreeComplex& C, const ChainMap& phi, const ChainMap& v);

std::vector<std::pair<int, int>> cells_of_tensor(const std::vector<Cell>& x, const std::vector<Cell>& y);
std::string cell_label(int s, int t);

// cocycles modulo coboundaries, with coordinates
class SubquotientBasis {
public:
    explicit SubquotientBasis(std::size_t dim = 0, std::size_t max_reps = 0) : b_(dim), r_(dim, max_reps) {}
    void add_boundary(const BitVec& v) { b_.add(v); }
    bool is_boundary(const BitVec& v) const { return b_.contains(v); }
    // true when v is new modulo boundaries and earlier representatives
    bool add_rep(const BitVec& v);
    std::size_t reps() const { return r_.inserted(); }
    // coordinates of a cocycle; nullopt if it is not in the span
    std::optional<BitVec> coordinates(const BitVec& z) const;

private:
    Echelon b_, r_;
    std::size_t n_reps_ = 0;
};

struct ExtGroup {
    int s = 0, t = 0;
    std::vector<BitVec> reps;  // cocycles in the Hom layout
    std::vector<int> cells;    // lowest cell carrying each representative
    std::shared_ptr<const SubquotientBasis> basis;
    std::size_t dim() const { return reps.size(); }
};

// Hom_A(C, M) with M a finite module: a cochain of bidegree (n, t) assigns to
// each generator g of level n an element of M in degree t - |g|
class HomComplex {
public:
    HomComplex(const FreeComplex& C, const FiniteModule& M) : C_(C), M_(M) {}

    struct Slot {
        int gen;
        int mdeg;
        std::size_t offset;
    };
    std::vector<Slot> slots(int n, int t) const;
    std::size_t dim(int n, int t) const;

    BitMatrix delta(int n, int t) const;  // (n, t) -> (n + 1, t)
    // precomposition with a self-map f of C: (n, t) -> (n + s, t + u)
    BitMatrix pullback(const ChainMap& f, int n, int t) const;
    // cap with the primitive dual to Sq(2^i): (n, t) -> (n + 1, t + 2^i)
    BitMatrix h_operator(int i, int n, int t) const;

    ExtGroup cohomology(int n, int t) const;
    const FreeComplex& complex() const { return C_; }
    const FiniteModule& module() const { return M_; }

private:
    using Transform = std::function<std::optional<std::pair<int, BitVec>>(int, const BitVec&)>;
    BitMatrix assemble(int row_level, int row_t, int col_level, int col_t,
                       const std::function<const Element&(int)>& image, int image_shift, const Transform& tr) const;
    const FreeComplex& C_;
    const FiniteModule& M_;
};

struct Window {
    int s_min = 0, s_max = 0;
    int t_min = 0, t_max = 0;
    std::optional<int> stem_min, stem_max;
    bool contains(int s, int t) const;
};

class ExtChart {
public:
    std::string algebra;
    std::string coefficients;
    std::string index_suffix;  // "(i1,...,in)" for the x_{t-s,s} labels
    int valid_s = 0, valid_t = 0;
    std::optional<int> valid_stem_below;
    std::vector<Cell> cells;
    std::map<std::pair<int, int>, ExtGroup> groups;
    // name -> source bidegree -> matrix (target dim x source dim)
    std::map<std::string, std::map<std::pair<int, int>, BitMatrix>> products;
    std::map<std::string, std::pair<int, int>> product_shift;

    bool computed(int s, int t) const { return groups.count({s, t}) > 0; }
    std::size_t dim(int s, int t) const;
    const BitMatrix* product(const std::string& name, int s, int t) const;
    std::string label(int s, int t) const;
    std::vector<std::pair<int, int>> nonzero() const;
};

struct ChartOptions {
    Window window;
    std::vector<int> h_products{0, 1, 2};
    int jobs = 1;
    std::string coefficients;
    std::string index_suffix;
};

// validity of a window against a complex and module
Window clamp_window(const FreeComplex& C, const FiniteModule& M, Window w);
ExtChart ext_cell(const FreeComplex& C, const FiniteModule& M, const ChartOptions& opt);
ExtChart ext_f2(const FreeResolution& P, const ChartOptions& opt);
ExtChart ext_module(const FreeResolution& P, const FiniteModule& M, const ChartOptions& opt);
// installs the action of a self-map of C under `name`
void install_self_map(ExtChart& chart, const FreeComplex& C, const FiniteModule& M, const std::string& name,
                      const ChainMap& f, int jobs = 1);

// class of the image of a cocycle, as coordinates in chart.groups[(s,t)]
BitVec class_of(const ExtChart& chart, int s, int t, const BitVec& cocycle);

struct ExtClass {
    int s = 0, t = 0;
    BitVec coords;
};
// product in Ext_A(F2, F2): lift b to a chain map and evaluate a on it
ExtClass yoneda_product(const FreeResolution& P, const ExtChart& chart, const ExtClass& a, const ExtClass& b);
// lift of a class of Ext(F2) to a self-map of P
ChainMap lift_class(const FreeResolution& P, const ExtChart& chart, const ExtClass& x, int high = -1);

// composite of k product steps from (s, t)
std::optional<BitMatrix> power_map(const ExtChart& chart, const std::string& name, int k, int s, int t);

struct LesReport {
    bool ok = true;
    std::size_t checked = 0;
    std::vector<std::string> violations;
};
// alpha maps (s, t) -> (s + s0, t + t0) in the base chart; the cone has its
// second cell at (s0 - 1, t0)
LesReport les_consistency(const ExtChart& base, const ExtChart& cone,
                          const std::map<std::pair<int, int>, BitMatrix>& alpha, int s0, int t0);

struct H8Data {
    FreeComplex complex;
    ChainMap attaching;  // lift of h0^3
};
H8Data build_h8(const FreeResolution& P, const ExtChart& f2);

struct SelfMapChoice {
    ChainMap map;
    ExtClass base_class;
    std::size_t base_dim = 0;        // dim of Ext(F2) at the requested bidegree
    std::size_t ambiguity_dim = 0;   // dim of classes through the top cell
    std::vector<std::string> report;
};
// canonical self-map of the two-cell object H restricting to x on the bottom
// cell; fails when Ext(F2) vanishes at (s, t)
SelfMapChoice select_self_map(const FreeResolution& P, const ExtChart& f2, const H8Data& h, int s, int t);

struct H8V18Data {
    FreeComplex complex;
    SelfMapChoice self_map;
};
H8V18Data build_h8v18(const FreeResolution& P, const ExtChart& f2, const H8Data& h);

nlohmann::json dump_resolution(const FreeResolution& P);
std::shared_ptr<FreeResolution> load_resolution(const nlohmann::json& j);

}  // namespace extforge
