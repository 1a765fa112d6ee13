#include "extforge/resolve.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "extforge/parallel.hpp"

namespace extforge {

void accumulate(Element& acc, const Element& x) {
    if (x.empty()) return;
    Element out;
    out.reserve(acc.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < acc.size() || j < x.size()) {
        if (j == x.size() || (i < acc.size() && acc[i].gen < x[j].gen)) {
            out.push_back(std::move(acc[i++]));
        } else if (i == acc.size() || x[j].gen < acc[i].gen) {
            out.push_back(x[j++]);
        } else {
            Term t{acc[i].gen, acc[i].coeff ^ x[j].coeff};
            ++i;
            ++j;
            if (t.coeff.any()) out.push_back(std::move(t));
        }
    }
    acc.swap(out);
}

static bool same(const Element& a, const Element& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].gen != b[k].gen || a[k].coeff != b[k].coeff) return false;
    return true;
}

static BitVec unit_coeff() { return BitVec::unit(1, 0); }

// ---------------------------------------------------------------- FreeComplex

FreeComplex::FreeComplex(std::shared_ptr<const Algebra> alg, int low, int high, int max_t)
    : alg_(std::move(alg)), low_(low), high_(high), max_t_(max_t), levels_(std::max(0, high - low + 1)) {}

const std::vector<Generator>& FreeComplex::level(int n) const {
    static const std::vector<Generator> empty;
    return has_level(n) ? levels_[n - low_] : empty;
}

std::vector<Generator>& FreeComplex::level_mut(int n) {
    if (!has_level(n)) throw std::out_of_range("FreeComplex: level " + std::to_string(n) + " not materialized");
    return levels_[n - low_];
}

void FreeComplex::set_bounds(int high, int max_t) {
    high_ = high;
    max_t_ = max_t;
    levels_.resize(std::max(0, high_ - low_ + 1));
}

FreeComplex::Layout FreeComplex::layout(int n, int d) const {
    Layout l;
    const auto& gens = level(n);
    l.position.assign(gens.size(), -1);
    for (std::size_t g = 0; g < gens.size(); ++g) {
        int a = d - gens[g].degree;
        if (a < 0) continue;
        l.position[g] = static_cast<long>(l.gens.size());
        l.gens.push_back(static_cast<int>(g));
        l.offset.push_back(l.dim);
        l.dim += alg_->dim(a);
    }
    return l;
}

BitVec FreeComplex::to_dense(int n, int d, const Element& e) const {
    Layout l = layout(n, d);
    BitVec v(l.dim);
    for (const auto& t : e) {
        long p = t.gen < static_cast<int>(l.position.size()) ? l.position[t.gen] : -1;
        if (p < 0) throw std::logic_error("to_dense: generator outside the layout");
        for (std::size_t k : t.coeff.ones()) v.flip(l.offset[p] + k);
    }
    return v;
}

Element FreeComplex::from_dense(int n, int d, const BitVec& v) const {
    Layout l = layout(n, d);
    Element e;
    const auto& gens = level(n);
    for (std::size_t p = 0; p < l.gens.size(); ++p) {
        std::size_t len = alg_->dim(d - gens[l.gens[p]].degree);
        if (!len) continue;
        BitVec c = v.slice(l.offset[p], len);
        if (c.any()) e.push_back({l.gens[p], std::move(c)});
    }
    return e;
}

Element FreeComplex::act(int a, const BitVec& x, int n, int d, const Element& e) const {
    Element out;
    const auto& gens = level(n);
    for (const auto& t : e) {
        int dc = d - gens[t.gen].degree;
        BitVec c(alg_->dim(a + dc));
        if (c.size() == 0) continue;
        for (std::size_t i : x.ones())
            for (std::size_t j : t.coeff.ones())
                for (int k : alg_->product(a, static_cast<int>(i), dc, static_cast<int>(j))) c.flip(k);
        if (c.any()) out.push_back({t.gen, std::move(c)});
    }
    return out;
}

Element FreeComplex::boundary(int n, int d, const Element& e) const {
    Element out;
    const auto& gens = level(n);
    for (const auto& t : e) {
        const Generator& g = gens[t.gen];
        if (g.boundary.empty()) continue;
        accumulate(out, act(d - g.degree, t.coeff, n - 1, g.degree, g.boundary));
    }
    return out;
}

BitMatrix FreeComplex::boundary_matrix(int n, int d) const {
    Layout cols = layout(n, d), rows = layout(n - 1, d);
    BitMatrix m(rows.dim, cols.dim);
    const auto& gens = level(n);
    const auto& below = level(n - 1);
    for (std::size_t p = 0; p < cols.gens.size(); ++p) {
        const Generator& g = gens[cols.gens[p]];
        int a = d - g.degree;
        for (std::size_t i = 0; i < alg_->dim(a); ++i) {
            std::size_t col = cols.offset[p] + i;
            for (const auto& t : g.boundary) {
                int dc = g.degree - below[t.gen].degree;
                std::size_t off = rows.offset[rows.position[t.gen]];
                for (std::size_t j : t.coeff.ones())
                    for (int k : alg_->product(a, static_cast<int>(i), dc, static_cast<int>(j))) m.flip(off + k, col);
            }
        }
    }
    return m;
}

bool FreeComplex::check_d_squared(std::string* why) const {
    for (int n = low_ + 2; n <= high_; ++n) {
        const auto& gens = level(n);
        for (std::size_t g = 0; g < gens.size(); ++g) {
            Element dd = boundary(n - 1, gens[g].degree, gens[g].boundary);
            if (!dd.empty()) {
                if (why) *why = "d^2 != 0 on generator " + std::to_string(g) + " of level " + std::to_string(n);
                return false;
            }
        }
    }
    return true;
}

bool FreeComplex::is_minimal() const {
    for (int n = low_ + 1; n <= high_; ++n) {
        const auto& below = level(n - 1);
        for (const auto& g : level(n))
            for (const auto& t : g.boundary)
                if (g.degree == below[t.gen].degree) return false;
    }
    return true;
}

// ---------------------------------------------------------------- chain maps

const Element& ChainMap::image(int n, int g) const {
    static const Element empty;
    if (n < low || n > high()) return empty;
    const auto& lvl = images[n - low];
    return g < static_cast<int>(lvl.size()) ? lvl[g] : empty;
}

Element apply(const FreeComplex& target, const FreeComplex& source, const ChainMap& f, int n, int d, const Element& e) {
    Element out;
    const auto& gens = source.level(n);
    for (const auto& t : e) {
        const Element& img = f.image(n, t.gen);
        if (img.empty()) continue;
        int deg = gens[t.gen].degree;
        accumulate(out, target.act(d - deg, t.coeff, n - f.shift_s, deg - f.shift_t, img));
    }
    return out;
}

ChainMap compose(const FreeComplex& a, const FreeComplex& b, const FreeComplex& c, const ChainMap& f, const ChainMap& g) {
    ChainMap h;
    h.shift_s = f.shift_s + g.shift_s;
    h.shift_t = f.shift_t + g.shift_t;
    h.low = f.low;
    int hi = std::min(f.high(), g.high() + f.shift_s);
    for (int n = f.low; n <= hi; ++n) {
        const auto& gens = a.level(n);
        std::vector<Element> lvl(gens.size());
        for (std::size_t k = 0; k < gens.size(); ++k)
            lvl[k] = apply(c, b, g, n - f.shift_s, gens[k].degree - f.shift_t, f.image(n, static_cast<int>(k)));
        h.images.push_back(std::move(lvl));
    }
    return h;
}

ChainMap add_maps(const ChainMap& f, const ChainMap& g) {
    if (f.shift_s != g.shift_s || f.shift_t != g.shift_t) throw std::invalid_argument("add_maps: shifts differ");
    ChainMap h;
    h.shift_s = f.shift_s;
    h.shift_t = f.shift_t;
    h.low = std::min(f.low, g.low);
    int hi = std::min(f.high(), g.high());
    for (int n = h.low; n <= hi; ++n) {
        std::size_t sz = 0;
        if (n >= f.low) sz = std::max(sz, f.images[n - f.low].size());
        if (n >= g.low) sz = std::max(sz, g.images[n - g.low].size());
        std::vector<Element> lvl(sz);
        for (std::size_t k = 0; k < sz; ++k) {
            lvl[k] = f.image(n, static_cast<int>(k));
            accumulate(lvl[k], g.image(n, static_cast<int>(k)));
        }
        h.images.push_back(std::move(lvl));
    }
    return h;
}

ChainMap identity_map(const FreeComplex& c) {
    ChainMap f;
    f.low = c.low();
    for (int n = c.low(); n <= c.high(); ++n) {
        std::vector<Element> lvl;
        for (std::size_t k = 0; k < c.level(n).size(); ++k) lvl.push_back({{static_cast<int>(k), unit_coeff()}});
        f.images.push_back(std::move(lvl));
    }
    return f;
}

bool is_chain_map(const FreeComplex& source, const FreeComplex& target, const ChainMap& f, std::string* why) {
    for (int n = std::max(f.low, source.low() + 1); n <= f.high(); ++n) {
        const auto& gens = source.level(n);
        for (std::size_t k = 0; k < gens.size(); ++k) {
            int d = gens[k].degree;
            Element lhs = target.boundary(n - f.shift_s, d - f.shift_t, f.image(n, static_cast<int>(k)));
            Element rhs = apply(target, source, f, n - 1, d, gens[k].boundary);
            if (!same(lhs, rhs)) {
                if (why) *why = "Df != fD on generator " + std::to_string(k) + " of level " + std::to_string(n);
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------- resolutions

std::size_t FreeResolution::generators(int s, int t) const {
    std::size_t n = 0;
    for (const auto& g : complex.level(s)) n += g.degree == t;
    return n;
}

std::shared_ptr<const FreeResolution::Solver> FreeResolution::solver(int m, int d) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find({m, d});
        if (it != cache_.end()) return it->second;
    }
    BitMatrix mat = complex.boundary_matrix(m, d);
    auto s = std::make_shared<Solver>();
    s->cols = complex.layout(m, d);
    s->ech = Echelon(mat.rows(), std::max<std::size_t>(1, mat.cols()));
    for (std::size_t c = 0; c < mat.cols(); ++c) s->ech.add(mat.column(c));
    std::size_t bytes = s->ech.rank() * (mat.rows() + mat.cols()) / 8 + 64;
    std::lock_guard<std::mutex> lock(mu_);
    if (cache_bytes_ + bytes > (std::size_t{768} << 20)) {
        cache_.clear();
        cache_bytes_ = 0;
    }
    auto [it, fresh] = cache_.emplace(std::make_pair(m, d), s);
    if (fresh) cache_bytes_ += bytes;
    return it->second;
}

void FreeResolution::clear_cache() const {
    std::lock_guard<std::mutex> lock(mu_);
    cache_.clear();
    cache_bytes_ = 0;
}

std::optional<Element> FreeResolution::preimage(int m, int d, const Element& y) const {
    if (y.empty()) return Element{};
    if (!complex.has_level(m) || d > complex.max_t()) throw std::out_of_range("preimage: outside the computed range");
    auto s = solver(m, d);
    BitVec dense = complex.to_dense(m - 1, d, y);
    auto combo = s->ech.express(dense);
    if (!combo) return std::nullopt;
    BitVec x(s->cols.dim);
    for (std::size_t k : combo->ones())
        if (k < x.size()) x.set(k);
    return complex.from_dense(m, d, x);
}

std::shared_ptr<FreeResolution> minimal_resolution(const Profile& p, int max_s, int max_t, int jobs) {
    if (max_s < 0 || max_t < 0) throw std::invalid_argument("minimal_resolution: bounds must be non-negative");
    auto alg = shared_algebra(p, max_t);
    auto res = std::make_shared<FreeResolution>();
    FreeComplex& C = res->complex;
    C = FreeComplex(alg, 0, max_s, max_t);
    C.augmented = true;
    C.cells = {{cell_label(0, 0), 0, 0}};
    C.name = "F2";
    C.level_mut(0).push_back({0, 0, {}});

    // matrices of d_{s-1} in each degree, columns in layout order
    std::vector<BitMatrix> prev(max_t + 1);
    for (int t = 0; t <= max_t; ++t) {
        prev[t] = BitMatrix(t == 0 ? 1 : 0, alg->dim(t));
        if (t == 0) prev[t].set(0, 0);
    }
    for (int s = 1; s <= max_s; ++s) {
        std::vector<std::vector<BitVec>> ker(max_t + 1);
        parallel_for(max_t + 1, jobs, [&](std::size_t t) {
            const BitMatrix& m = prev[t];
            if (m.rows() == 0) {
                for (std::size_t c = 0; c < m.cols(); ++c) ker[t].push_back(BitVec::unit(m.cols(), c));
            } else {
                ker[t] = kernel_basis(m);
            }
        });
        std::vector<BitMatrix> cur(max_t + 1);
        auto& gens = C.level_mut(s);
        const auto& below = C.level(s - 1);
        for (int t = 0; t <= max_t; ++t) {
            FreeComplex::Layout rows = C.layout(s - 1, t);
            std::vector<BitVec> cols;
            Echelon image(rows.dim);
            for (const auto& g : gens) {
                int a = t - g.degree;
                for (std::size_t i = 0; i < alg->dim(a); ++i) {
                    BitVec v(rows.dim);
                    for (const auto& term : g.boundary) {
                        int dc = g.degree - below[term.gen].degree;
                        std::size_t off = rows.offset[rows.position[term.gen]];
                        for (std::size_t j : term.coeff.ones())
                            for (int k : alg->product(a, static_cast<int>(i), dc, static_cast<int>(j))) v.flip(off + k);
                    }
                    image.add(v);
                    cols.push_back(std::move(v));
                }
            }
            for (auto& v : ker[t]) {
                if (!image.add(v)) continue;
                gens.push_back({t, 0, C.from_dense(s - 1, t, v)});
                cols.push_back(v);
            }
            cur[t] = BitMatrix::from_columns(cols, rows.dim);
        }
        prev.swap(cur);
    }
    return res;
}

// ---------------------------------------------------------------- lifting

ChainMap lift_chain_map(const FreeResolution& P, const FreeComplex& C, int s0, int t0, const BitVec& cochain, int high) {
    if (high < 0) high = std::min(C.high(), P.max_s() + s0);
    if (high > P.max_s() + s0) throw std::out_of_range("lift_chain_map: target resolution too short");
    const FreeComplex& T = P.complex;
    ChainMap f;
    f.shift_s = s0;
    f.shift_t = t0;
    f.low = s0;
    {
        const auto& gens = C.level(s0);
        std::vector<Element> base(gens.size());
        std::size_t k = 0;
        for (std::size_t g = 0; g < gens.size(); ++g) {
            if (gens[g].degree != t0) continue;
            if (k >= cochain.size()) throw std::invalid_argument("lift_chain_map: cochain too short");
            if (cochain.get(k)) base[g] = {{0, unit_coeff()}};
            ++k;
        }
        if (k != cochain.size()) throw std::invalid_argument("lift_chain_map: cochain has the wrong length");
        f.images.push_back(std::move(base));
    }
    for (int n = s0 + 1; n <= high; ++n) {
        const auto& gens = C.level(n);
        std::vector<Element> lvl(gens.size());
        f.images.emplace_back();
        parallel_for(gens.size(), 1, [&](std::size_t g) {
            int d = gens[g].degree;
            Element target = apply(T, C, f, n - 1, d, gens[g].boundary);
            if (target.empty()) return;
            if (d - t0 > T.max_t()) throw std::out_of_range("lift_chain_map: degree beyond the resolution");
            auto x = P.preimage(n - s0, d - t0, target);
            if (!x) throw std::runtime_error("lift_chain_map: not a cocycle (no lift at level " + std::to_string(n) + ")");
            lvl[g] = std::move(*x);
        });
        f.images.back() = std::move(lvl);
    }
    return f;
}

ChainMap null_homotopy(const FreeResolution& P, const FreeComplex& C, const ChainMap& G, int high) {
    const FreeComplex& T = P.complex;
    int s = G.shift_s, t = G.shift_t;
    if (high < 0) high = std::min(C.high(), G.high());
    ChainMap H;
    H.shift_s = s - 1;
    H.shift_t = t;
    H.low = s - 1;
    // base: H_{s-1} into P_0 must satisfy eps G_s = (eps H_{s-1}) D
    FiniteModule f2 = trivial(C.profile());
    HomComplex hom(C, f2);
    BitVec e(hom.dim(s, t));
    {
        auto slots = hom.slots(s, t);
        for (const auto& sl : slots)
            for (const auto& term : G.image(s, sl.gen))
                if (term.gen == 0 && term.coeff.size() == 1 && term.coeff.get(0)) e.flip(sl.offset);
    }
    std::vector<Element> base(C.level(s - 1).size());
    if (e.any()) {
        BitMatrix d = hom.delta(s - 1, t);
        auto c = solve(d, e);
        if (!c) throw std::runtime_error("null_homotopy: the map is nonzero on Ext");
        for (const auto& sl : hom.slots(s - 1, t))
            if (c->get(sl.offset)) base[sl.gen] = {{0, unit_coeff()}};
    }
    H.images.push_back(std::move(base));
    for (int n = s; n <= high; ++n) {
        const auto& gens = C.level(n);
        std::vector<Element> lvl(gens.size());
        for (std::size_t g = 0; g < gens.size(); ++g) {
            int d = gens[g].degree;
            Element r = G.image(n, static_cast<int>(g));
            accumulate(r, apply(T, C, H, n - 1, d, gens[g].boundary));
            if (r.empty()) continue;
            if (n == s && d == t) throw std::logic_error("null_homotopy: augmentation condition violated");
            auto x = P.preimage(n - s + 1, d - t, r);
            if (!x) throw std::runtime_error("null_homotopy: no homotopy at level " + std::to_string(n));
            lvl[g] = std::move(*x);
        }
        H.images.push_back(std::move(lvl));
    }
    return H;
}

// ---------------------------------------------------------------- cones

std::string cell_label(int s, int t) { return "[" + std::to_string(t - s) + "]"; }

FreeComplex cone(const FreeComplex& X, const FreeComplex& Y, const ChainMap& f, const std::string& name) {
    int s0 = f.shift_s, t0 = f.shift_t;
    if (X.profile() != Y.profile()) throw std::invalid_argument("cone: algebra mismatch");
    bool nonzero = false;
    for (const auto& lvl : f.images)
        for (const auto& e : lvl) nonzero |= !e.empty();
    if (!nonzero) throw std::invalid_argument("cone: attaching map is zero");
    int low = std::min(X.low(), Y.low() + s0 - 1);
    int high = std::min({X.high(), Y.high() + s0 - 1, f.high()});
    int max_t = std::min(X.max_t(), Y.max_t() + t0);
    FreeComplex C(X.algebra_ptr(), low, high, max_t);
    C.name = name;
    C.cells = X.cells;
    int nx = static_cast<int>(X.cells.size());
    for (const auto& c : Y.cells) C.cells.push_back({cell_label(c.s + s0 - 1, c.t + t0), c.s + s0 - 1, c.t + t0});
    // generators beyond max_t are dropped, so boundaries are reindexed
    auto index_map = [&](const FreeComplex& Z, int n, int shift, int base) {
        std::vector<int> m;
        int k = base;
        for (const auto& g : Z.level(n)) m.push_back(g.degree + shift <= max_t ? k++ : -1);
        return m;
    };
    auto remap = [](const Element& e, const std::vector<int>& m) {
        Element out;
        for (const auto& term : e) {
            if (m.at(term.gen) < 0) throw std::logic_error("cone: boundary reaches a dropped generator");
            out.push_back({m[term.gen], term.coeff});
        }
        return out;
    };
    for (int n = low; n <= high; ++n) {
        auto& out = C.level_mut(n);
        auto xm = index_map(X, n - 1, 0, 0);
        int off = static_cast<int>(std::count_if(xm.begin(), xm.end(), [](int v) { return v >= 0; }));
        auto ym = index_map(Y, n - s0, t0, off);
        const auto& xs = X.level(n);
        for (std::size_t g = 0; g < xs.size(); ++g) {
            if (xs[g].degree > max_t) continue;
            Generator ng{xs[g].degree, xs[g].cell, remap(xs[g].boundary, xm)};
            accumulate(ng.boundary, remap(f.image(n, static_cast<int>(g)), ym));
            out.push_back(std::move(ng));
        }
        for (const auto& y : Y.level(n - s0 + 1)) {
            if (y.degree + t0 > max_t) continue;
            out.push_back({y.degree + t0, y.cell + nx, remap(y.boundary, ym)});
        }
    }
    return C;
}

ChainMap extend_over_cone(const FreeResolution& P, const FreeComplex& C, const ChainMap& phi, const ChainMap& v) {
    const FreeComplex& T = P.complex;
    int s0 = phi.shift_s;
    ChainMap G = add_maps(compose(T, T, T, v, phi), compose(T, T, T, phi, v));
    ChainMap H = null_homotopy(P, T, G, C.high());
    ChainMap F;
    F.shift_s = v.shift_s;
    F.shift_t = v.shift_t;
    F.low = C.low();
    for (int n = C.low(); n <= C.high(); ++n) {
        const auto& gens = C.level(n);
        std::vector<Element> lvl(gens.size());
        int m = n - v.shift_s;
        int off = static_cast<int>(T.level(m).size());
        int nx = static_cast<int>(T.level(n).size());
        for (std::size_t g = 0; g < gens.size(); ++g) {
            Element e;
            if (static_cast<int>(g) < nx) {
                e = v.image(n, static_cast<int>(g));
                for (const auto& term : H.image(n, static_cast<int>(g))) e.push_back({term.gen + off, term.coeff});
            } else {
                int y = static_cast<int>(g) - nx;
                for (const auto& term : v.image(n - s0 + 1, y)) e.push_back({term.gen + off, term.coeff});
            }
            lvl[g] = std::move(e);
        }
        F.images.push_back(std::move(lvl));
    }
    return F;
}

std::vector<std::pair<int, int>> cells_of_tensor(const std::vector<Cell>& x, const std::vector<Cell>& y) {
    std::vector<std::pair<int, int>> out;
    for (const auto& a : x)
        for (const auto& b : y) out.emplace_back(a.t + b.t - a.s - b.s, a.s + b.s);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- Hom complexes

bool SubquotientBasis::add_rep(const BitVec& v) {
    BitVec r = v;
    b_.reduce(r);
    if (r.none() || r_.contains(r)) return false;
    r_.add(r);
    ++n_reps_;
    return true;
}

std::optional<BitVec> SubquotientBasis::coordinates(const BitVec& z) const {
    BitVec r = z;
    b_.reduce(r);
    if (n_reps_ == 0) return r.none() ? std::optional<BitVec>(BitVec(0)) : std::nullopt;
    auto c = r_.express(r);
    if (!c) return std::nullopt;
    return c->slice(0, n_reps_);
}

std::vector<HomComplex::Slot> HomComplex::slots(int n, int t) const {
    std::vector<Slot> out;
    std::size_t off = 0;
    const auto& gens = C_.level(n);
    for (std::size_t g = 0; g < gens.size(); ++g) {
        int md = t - gens[g].degree;
        std::size_t sz = M_.dim_in_degree(md);
        if (!sz) continue;
        out.push_back({static_cast<int>(g), md, off});
        off += sz;
    }
    return out;
}

std::size_t HomComplex::dim(int n, int t) const {
    std::size_t d = 0;
    for (const auto& g : C_.level(n)) d += M_.dim_in_degree(t - g.degree);
    return d;
}

BitMatrix HomComplex::assemble(int row_level, int row_t, int col_level, int col_t,
                               const std::function<const Element&(int)>& image, int image_shift,
                               const Transform& tr) const {
    auto rows = slots(row_level, row_t), cols = slots(col_level, col_t);
    std::size_t nr = rows.empty() ? 0 : rows.back().offset + M_.dim_in_degree(rows.back().mdeg);
    std::size_t nc = cols.empty() ? 0 : cols.back().offset + M_.dim_in_degree(cols.back().mdeg);
    BitMatrix m(nr, nc);
    if (!nr || !nc) return m;
    std::vector<long> col_of(C_.level(col_level).size(), -1);
    for (std::size_t k = 0; k < cols.size(); ++k) col_of[cols[k].gen] = static_cast<long>(k);
    const auto& rgens = C_.level(row_level);
    const auto& cgens = C_.level(col_level);
    for (const auto& rs : rows) {
        int dh = rgens[rs.gen].degree - image_shift;
        for (const auto& term : image(rs.gen)) {
            long ci = col_of[term.gen];
            if (ci < 0) continue;
            const Slot& cs = cols[ci];
            int a = dh - cgens[term.gen].degree;
            auto x = tr(a, term.coeff);
            if (!x) continue;
            int a2 = x->first;
            if (cs.mdeg - a2 != rs.mdeg) throw std::logic_error("HomComplex: degree bookkeeping");
            for (std::size_t k : x->second.ones()) {
                const BitMatrix* b = M_.block(a2, static_cast<int>(k), cs.mdeg);
                if (!b) continue;
                for (std::size_t r = 0; r < b->rows(); ++r)
                    for (std::size_t c = 0; c < b->cols(); ++c)
                        if (b->get(r, c)) m.flip(rs.offset + r, cs.offset + c);
            }
        }
    }
    return m;
}

BitMatrix HomComplex::delta(int n, int t) const {
    const auto& gens = C_.level(n + 1);
    return assemble(
        n + 1, t, n, t, [&](int g) -> const Element& { return gens[g].boundary; }, 0,
        [](int a, const BitVec& x) { return std::optional<std::pair<int, BitVec>>({a, x}); });
}

BitMatrix HomComplex::pullback(const ChainMap& f, int n, int t) const {
    int rn = n + f.shift_s;
    return assemble(
        rn, t + f.shift_t, n, t, [&](int g) -> const Element& { return f.image(rn, g); }, f.shift_t,
        [](int a, const BitVec& x) { return std::optional<std::pair<int, BitVec>>({a, x}); });
}

BitMatrix HomComplex::h_operator(int i, int n, int t) const {
    const auto& gens = C_.level(n + 1);
    const Algebra& alg = C_.algebra();
    int p = 1 << i;
    return assemble(
        n + 1, t + p, n, t, [&](int g) -> const Element& { return gens[g].boundary; }, 0,
        [&](int a, const BitVec& x) -> std::optional<std::pair<int, BitVec>> {
            if (a < p) return std::nullopt;
            BitVec out(alg.dim(a - p));
            for (std::size_t k : x.ones()) {
                Exponents r = alg.basis(a)[k];
                if (r.empty() || r[0] < p) continue;
                r[0] -= p;
                trim(r);
                int idx = alg.index_of(r);
                if (idx < 0) continue;
                out.flip(idx);
            }
            if (out.none()) return std::nullopt;
            return std::make_pair(a - p, out);
        });
}

ExtGroup HomComplex::cohomology(int n, int t) const {
    ExtGroup g;
    g.s = n;
    g.t = t;
    std::size_t dn = dim(n, t);
    if (!dn) {
        g.basis = std::make_shared<SubquotientBasis>(0, 0);
        return g;
    }
    BitMatrix d = delta(n, t);
    auto kernel_of = [&](const std::vector<std::size_t>& cols) {
        BitMatrix sub(d.rows(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < d.rows(); ++r)
                if (d.get(r, cols[c])) sub.set(r, c);
        std::vector<BitVec> k;
        if (sub.rows() == 0) {
            for (std::size_t c = 0; c < cols.size(); ++c) k.push_back(BitVec::unit(cols.size(), c));
        } else {
            k = kernel_basis(sub);
        }
        std::vector<BitVec> out;
        for (auto& v : k) {
            BitVec w(dn);
            for (std::size_t c : v.ones()) w.set(cols[c]);
            out.push_back(std::move(w));
        }
        return out;
    };
    // cells present in this level, with the columns they own
    auto sl = slots(n, t);
    std::map<int, std::vector<std::size_t>> cell_cols;
    const auto& gens = C_.level(n);
    for (const auto& s : sl)
        for (std::size_t k = 0; k < M_.dim_in_degree(s.mdeg); ++k) cell_cols[gens[s.gen].cell].push_back(s.offset + k);
    std::vector<std::size_t> all(dn);
    for (std::size_t k = 0; k < dn; ++k) all[k] = k;
    std::vector<BitVec> Z = kernel_of(all);
    auto basis = std::make_shared<SubquotientBasis>(dn, std::max<std::size_t>(Z.size(), 1));
    if (C_.has_level(n - 1)) {
        BitMatrix b = delta(n - 1, t);
        for (std::size_t c = 0; c < b.cols(); ++c) {
            BitVec v = b.column(c);
            if (v.any()) basis->add_boundary(v);
        }
    }
    // representatives supported on the lowest possible cells
    std::vector<std::size_t> upto;
    std::size_t seen = 0;
    for (auto& [cell, cols] : cell_cols) {
        ++seen;
        upto.insert(upto.end(), cols.begin(), cols.end());
        std::sort(upto.begin(), upto.end());
        std::vector<BitVec> zc = seen == cell_cols.size() ? Z : kernel_of(upto);
        for (auto& z : zc)
            if (basis->add_rep(z)) {
                g.reps.push_back(z);
                g.cells.push_back(cell);
            }
    }
    g.basis = basis;
    return g;
}

// ---------------------------------------------------------------- charts

bool Window::contains(int s, int t) const {
    if (s < s_min || s > s_max || t < t_min || t > t_max) return false;
    if (stem_min && t - s < *stem_min) return false;
    if (stem_max && t - s > *stem_max) return false;
    return true;
}

std::size_t ExtChart::dim(int s, int t) const {
    auto it = groups.find({s, t});
    if (it == groups.end()) throw std::out_of_range("ExtChart: bidegree (" + std::to_string(s) + "," + std::to_string(t) + ") not computed");
    return it->second.dim();
}

const BitMatrix* ExtChart::product(const std::string& name, int s, int t) const {
    auto it = products.find(name);
    if (it == products.end()) return nullptr;
    auto jt = it->second.find({s, t});
    return jt == it->second.end() ? nullptr : &jt->second;
}

std::string ExtChart::label(int s, int t) const {
    auto it = groups.find({s, t});
    if (it == groups.end() || it->second.dim() != 1) return "";
    return "x_{" + std::to_string(t - s) + "," + std::to_string(s) + "}" + index_suffix;
}

std::vector<std::pair<int, int>> ExtChart::nonzero() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [k, g] : groups)
        if (g.dim()) out.push_back(k);
    return out;
}

Window clamp_window(const FreeComplex& C, const FiniteModule& M, Window w) {
    w.s_min = std::max(w.s_min, C.low());
    w.s_max = std::min(w.s_max, C.high() - 1);
    w.t_max = std::min(w.t_max, C.max_t() + (M.dim() ? M.min_degree() : 0));
    return w;
}

static BitMatrix induced(const BitMatrix& op, const ExtGroup& src, const ExtGroup& tgt) {
    BitMatrix m(tgt.dim(), src.dim());
    for (std::size_t k = 0; k < src.dim(); ++k) {
        BitVec z = apply(op, src.reps[k]);
        auto c = tgt.basis->coordinates(z);
        if (!c) throw std::logic_error("induced map does not land in cocycles");
        for (std::size_t r : c->ones()) m.set(r, k);
    }
    return m;
}

ExtChart ext_cell(const FreeComplex& C, const FiniteModule& M, const ChartOptions& opt) {
    if (C.profile() != M.profile()) throw std::invalid_argument("ext: algebra mismatch between complex and module");
    Window w = clamp_window(C, M, opt.window);
    ExtChart chart;
    chart.algebra = C.profile().name();
    chart.coefficients = opt.coefficients.empty() ? C.name + " ; " + M.name : opt.coefficients;
    chart.index_suffix = opt.index_suffix;
    chart.valid_s = w.s_max;
    chart.valid_t = w.t_max;
    chart.cells = C.cells;
    if (M.valid_below) {
        int lo = 1 << 30;
        for (const auto& c : C.cells) lo = std::min(lo, c.t - c.s);
        chart.valid_stem_below = *M.valid_below + (C.cells.empty() ? 0 : lo);
    }
    HomComplex hom(C, M);
    std::vector<std::pair<int, int>> todo;
    for (int s = w.s_min; s <= w.s_max; ++s)
        for (int t = std::max(w.t_min, 0); t <= w.t_max; ++t)
            if (w.contains(s, t)) todo.emplace_back(s, t);
    std::vector<ExtGroup> out(todo.size());
    parallel_for(todo.size(), opt.jobs, [&](std::size_t k) { out[k] = hom.cohomology(todo[k].first, todo[k].second); });
    for (std::size_t k = 0; k < todo.size(); ++k) chart.groups.emplace(todo[k], std::move(out[k]));

    for (int i : opt.h_products) {
        std::string name = "h" + std::to_string(i);
        int p = 1 << i;
        chart.product_shift[name] = {1, p};
        std::vector<std::pair<int, int>> src;
        for (const auto& [k, g] : chart.groups)
            if (chart.computed(k.first + 1, k.second + p)) src.push_back(k);
        std::vector<BitMatrix> mats(src.size());
        parallel_for(src.size(), opt.jobs, [&](std::size_t k) {
            auto [s, t] = src[k];
            const ExtGroup& a = chart.groups.at({s, t});
            const ExtGroup& b = chart.groups.at({s + 1, t + p});
            if (!a.dim() || !b.dim()) {
                mats[k] = BitMatrix(b.dim(), a.dim());
                return;
            }
            mats[k] = induced(hom.h_operator(i, s, t), a, b);
        });
        auto& dst = chart.products[name];
        for (std::size_t k = 0; k < src.size(); ++k) dst.emplace(src[k], std::move(mats[k]));
    }
    return chart;
}

ExtChart ext_f2(const FreeResolution& P, const ChartOptions& opt) {
    FiniteModule f2 = trivial(P.complex.profile());
    ChartOptions o = opt;
    if (o.coefficients.empty()) o.coefficients = "F2";
    return ext_cell(P.complex, f2, o);
}

ExtChart ext_module(const FreeResolution& P, const FiniteModule& M, const ChartOptions& opt) {
    ChartOptions o = opt;
    if (o.coefficients.empty()) o.coefficients = M.name;
    return ext_cell(P.complex, M, o);
}

void install_self_map(ExtChart& chart, const FreeComplex& C, const FiniteModule& M, const std::string& name,
                      const ChainMap& f, int jobs) {
    HomComplex hom(C, M);
    chart.product_shift[name] = {f.shift_s, f.shift_t};
    std::vector<std::pair<int, int>> src;
    for (const auto& [k, g] : chart.groups)
        if (chart.computed(k.first + f.shift_s, k.second + f.shift_t) && k.first + f.shift_s <= f.high()) src.push_back(k);
    std::vector<BitMatrix> mats(src.size());
    parallel_for(src.size(), jobs, [&](std::size_t k) {
        auto [s, t] = src[k];
        const ExtGroup& a = chart.groups.at({s, t});
        const ExtGroup& b = chart.groups.at({s + f.shift_s, t + f.shift_t});
        if (!a.dim() || !b.dim()) {
            mats[k] = BitMatrix(b.dim(), a.dim());
            return;
        }
        mats[k] = induced(hom.pullback(f, s, t), a, b);
    });
    auto& dst = chart.products[name];
    for (std::size_t k = 0; k < src.size(); ++k) dst[src[k]] = std::move(mats[k]);
}

BitVec class_of(const ExtChart& chart, int s, int t, const BitVec& cocycle) {
    auto it = chart.groups.find({s, t});
    if (it == chart.groups.end()) throw std::out_of_range("class_of: bidegree not computed");
    auto c = it->second.basis->coordinates(cocycle);
    if (!c) throw std::invalid_argument("class_of: not a cocycle");
    return *c;
}

static BitVec cocycle_of(const ExtChart& chart, const ExtClass& x) {
    const ExtGroup& g = chart.groups.at({x.s, x.t});
    if (x.coords.size() != g.dim()) throw std::invalid_argument("class has the wrong number of coordinates");
    BitVec z(g.reps.empty() ? 0 : g.reps[0].size());
    for (std::size_t k : x.coords.ones()) z ^= g.reps[k];
    return z;
}

ChainMap lift_class(const FreeResolution& P, const ExtChart& chart, const ExtClass& x, int high) {
    return lift_chain_map(P, P.complex, x.s, x.t, cocycle_of(chart, x), high);
}

ExtClass yoneda_product(const FreeResolution& P, const ExtChart& chart, const ExtClass& a, const ExtClass& b) {
    int s = a.s + b.s, t = a.t + b.t;
    if (!chart.computed(s, t)) throw std::out_of_range("yoneda_product: product bidegree outside the chart");
    ExtClass out{s, t, BitVec(chart.dim(s, t))};
    if (a.coords.none() || b.coords.none()) return out;
    ChainMap B = lift_class(P, chart, b, s);
    FiniteModule f2 = trivial(P.complex.profile());
    HomComplex hom(P.complex, f2);
    BitVec z = apply(hom.pullback(B, a.s, a.t), cocycle_of(chart, a));
    out.coords = class_of(chart, s, t, z);
    return out;
}

std::optional<BitMatrix> power_map(const ExtChart& chart, const std::string& name, int k, int s, int t) {
    auto sh = chart.product_shift.find(name);
    if (sh == chart.product_shift.end() || !chart.computed(s, t)) return std::nullopt;
    BitMatrix m = BitMatrix::identity(chart.dim(s, t));
    for (int step = 0; step < k; ++step) {
        const BitMatrix* p = chart.product(name, s, t);
        if (!p) return std::nullopt;
        m = multiply(*p, m);
        s += sh->second.first;
        t += sh->second.second;
    }
    return m;
}

LesReport les_consistency(const ExtChart& base, const ExtChart& cone,
                          const std::map<std::pair<int, int>, BitMatrix>& alpha, int s0, int t0) {
    LesReport rep;
    auto dim_or = [&](int s, int t) -> std::optional<std::size_t> {
        if (s < 0) return 0;
        if (!base.computed(s, t)) return std::nullopt;
        return base.dim(s, t);
    };
    auto rank_of = [&](int s, int t) -> std::optional<std::size_t> {
        auto d = dim_or(s, t);
        if (!d) return std::nullopt;
        if (*d == 0) return 0;
        auto it = alpha.find({s, t});
        if (it == alpha.end()) return std::nullopt;
        return rank(it->second);
    };
    for (const auto& [k, g] : cone.groups) {
        auto [n, t] = k;
        auto target = dim_or(n, t);
        auto r1 = rank_of(n - s0, t - t0);
        auto src2 = dim_or(n - s0 + 1, t - t0);
        auto r2 = rank_of(n - s0 + 1, t - t0);
        if (!target || !r1 || !src2 || !r2) continue;
        std::size_t expect = (*target - *r1) + (*src2 - *r2);
        ++rep.checked;
        if (expect != g.dim()) {
            rep.ok = false;
            std::ostringstream os;
            os << "(s,t)=(" << n << "," << t << "): cone has " << g.dim() << ", sequence predicts " << expect;
            rep.violations.push_back(os.str());
        }
    }
    return rep;
}

// ---------------------------------------------------------------- H(8) and H(8, v1^8)

H8Data build_h8(const FreeResolution& P, const ExtChart& f2) {
    if (!f2.computed(3, 3) || f2.dim(3, 3) != 1) throw std::runtime_error("build_h8: need Ext^{3,3}(F2) = F2 in the chart");
    H8Data h;
    BitVec z = f2.groups.at({3, 3}).reps[0];
    h.attaching = lift_chain_map(P, P.complex, 3, 3, z, P.max_s());
    h.complex = cone(P.complex, P.complex, h.attaching, "H8");
    return h;
}

SelfMapChoice select_self_map(const FreeResolution& P, const ExtChart& f2, const H8Data& h, int s, int t) {
    SelfMapChoice out;
    const FreeComplex& C = h.complex;
    if (s == 0 && t == 0) {
        out.map = identity_map(C);
        out.base_class = {0, 0, BitVec::unit(1, 0)};
        out.base_dim = 1;
        out.report.push_back("identity");
        return out;
    }
    if (!f2.computed(s, t)) throw std::out_of_range("select_self_map: bidegree outside the F2 chart");
    out.base_dim = f2.dim(s, t);
    if (out.base_dim == 0) throw std::runtime_error("select_self_map: Ext(F2) vanishes at the requested bidegree");
    out.base_class = {s, t, BitVec::unit(out.base_dim, 0)};
    if (out.base_dim > 1)
        out.report.push_back("Ext(F2) at (" + std::to_string(s) + "," + std::to_string(t) + ") has dimension " +
                             std::to_string(out.base_dim) + "; using its first basis class");
    ChainMap v = lift_class(P, f2, out.base_class, C.high());
    out.map = extend_over_cone(P, C, h.attaching, v);
    int as = s + h.attaching.shift_s - 1, at = t + h.attaching.shift_t;
    if (f2.computed(as, at)) {
        out.ambiguity_dim = f2.dim(as, at);
        out.report.push_back("maps through the top cell: Ext(F2) at (" + std::to_string(as) + "," + std::to_string(at) +
                             ") has dimension " + std::to_string(out.ambiguity_dim));
    } else {
        out.report.push_back("ambiguity not determined: (" + std::to_string(as) + "," + std::to_string(at) +
                             ") outside the chart");
    }
    return out;
}

H8V18Data build_h8v18(const FreeResolution& P, const ExtChart& f2, const H8Data& h) {
    H8V18Data d;
    d.self_map = select_self_map(P, f2, h, 8, 24);
    d.complex = cone(h.complex, h.complex, d.self_map.map, "H8v18");
    return d;
}

// ---------------------------------------------------------------- JSON

nlohmann::json dump_resolution(const FreeResolution& P) {
    const FreeComplex& C = P.complex;
    nlohmann::json j;
    j["format"] = "ext-forge-resolution";
    j["version"] = 1;
    j["algebra"] = C.profile().name();
    j["max_s"] = C.high();
    j["max_t"] = C.max_t();
    auto& levels = j["levels"] = nlohmann::json::array();
    for (int n = 0; n <= C.high(); ++n) {
        auto lvl = nlohmann::json::array();
        for (const auto& g : C.level(n)) {
            auto terms = nlohmann::json::array();
            for (const auto& t : g.boundary) terms.push_back({t.gen, t.coeff.ones()});
            lvl.push_back({g.degree, terms});
        }
        levels.push_back(lvl);
    }
    return j;
}

std::shared_ptr<FreeResolution> load_resolution(const nlohmann::json& j) {
    if (j.value("format", "") != "ext-forge-resolution") throw std::invalid_argument("not an ext-forge resolution");
    if (j.value("version", 0) != 1) throw std::invalid_argument("unsupported resolution format version");
    Profile p = Profile::parse(j.at("algebra").get<std::string>());
    int max_s = j.at("max_s").get<int>(), max_t = j.at("max_t").get<int>();
    auto alg = shared_algebra(p, max_t);
    auto res = std::make_shared<FreeResolution>();
    FreeComplex& C = res->complex;
    C = FreeComplex(alg, 0, max_s, max_t);
    C.augmented = true;
    C.cells = {{cell_label(0, 0), 0, 0}};
    C.name = "F2";
    const auto& levels = j.at("levels");
    if (static_cast<int>(levels.size()) != max_s + 1) throw std::invalid_argument("resolution: wrong number of levels");
    for (int n = 0; n <= max_s; ++n) {
        auto& gens = C.level_mut(n);
        for (const auto& g : levels[n]) {
            Generator gen{g.at(0).get<int>(), 0, {}};
            for (const auto& t : g.at(1)) {
                int idx = t.at(0).get<int>();
                int dc = gen.degree - C.level(n - 1).at(idx).degree;
                BitVec c(alg->dim(dc));
                for (const auto& k : t.at(1)) c.set(k.get<std::size_t>());
                gen.boundary.push_back({idx, std::move(c)});
            }
            gens.push_back(std::move(gen));
        }
    }
    return res;
}

}  // namespace extforge
