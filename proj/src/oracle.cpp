#include "extforge/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>

namespace extforge::oracle {

namespace {

using Mono = std::vector<int>;
using Tensor = std::set<std::pair<Mono, Mono>>;  // mod 2: membership toggles

void toggle(Tensor& t, const std::pair<Mono, Mono>& x) {
    auto it = t.find(x);
    if (it == t.end()) t.insert(x);
    else t.erase(it);
}

Mono add(const Mono& a, const Mono& b) {
    Mono c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

}  // namespace

DualAlgebra::DualAlgebra(std::vector<int> bounds) : bounds_(std::move(bounds)) {
    if (bounds_.empty()) throw std::invalid_argument("oracle: the dual algebra must be finite");
    // every exponent vector below the bounds
    Mono e(bounds_.size(), 0);
    for (;;) {
        int d = 0;
        for (std::size_t k = 0; k < e.size(); ++k) d += e[k] * ((1 << (k + 1)) - 1);
        idx_[e] = mono_.size();
        mono_.push_back(e);
        deg_.push_back(d);
        top_ = std::max(top_, d);
        std::size_t k = 0;
        while (k < e.size() && ++e[k] == (1 << bounds_[k])) e[k++] = 0;
        if (k == e.size()) break;
    }
    // reorder by degree so the unit comes first
    std::vector<std::size_t> order(mono_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deg_[a] < deg_[b]; });
    std::vector<Mono> m2;
    std::vector<int> d2;
    for (auto i : order) {
        m2.push_back(mono_[i]);
        d2.push_back(deg_[i]);
    }
    mono_ = std::move(m2);
    deg_ = std::move(d2);
    idx_.clear();
    for (std::size_t i = 0; i < mono_.size(); ++i) {
        idx_[mono_[i]] = i;
        by_deg_[deg_[i]].push_back(i);
    }

    auto reduce = [&](const Tensor& t) {
        Tensor out;
        for (const auto& [a, b] : t)
            if (index(a) >= 0 && index(b) >= 0) toggle(out, {a, b});
        return out;
    };
    auto mul = [&](const Tensor& x, const Tensor& y) {
        Tensor out;
        for (const auto& [a, b] : x)
            for (const auto& [c, d] : y) toggle(out, {add(a, c), add(b, d)});
        return reduce(out);
    };
    std::size_t n = bounds_.size();
    auto xi_pow = [&](std::size_t k, int p) {  // xi_k^(2^p), k >= 1
        Mono m(n, 0);
        if (k > 0) m[k - 1] = 1 << p;
        return m;
    };
    cop_.resize(mono_.size());
    for (std::size_t i = 0; i < mono_.size(); ++i) {
        Tensor acc{{Mono(n, 0), Mono(n, 0)}};
        for (std::size_t k = 1; k <= n; ++k)
            for (int p = 0; p < bounds_[k - 1]; ++p) {
                if (!((mono_[i][k - 1] >> p) & 1)) continue;
                // psi(xi_k)^(2^p) = sum_j xi_{k-j}^(2^(j+p)) (x) xi_j^(2^p)
                Tensor f;
                for (std::size_t j = 0; j <= k; ++j) toggle(f, {xi_pow(k - j, static_cast<int>(j) + p), xi_pow(j, p)});
                acc = mul(acc, reduce(f));
            }
        for (const auto& [a, b] : acc) cop_[i].emplace_back(index(a), index(b));
        std::sort(cop_[i].begin(), cop_[i].end());
    }
}

long DualAlgebra::index(std::vector<int> e) const {
    if (e.size() > bounds_.size()) {
        for (std::size_t k = bounds_.size(); k < e.size(); ++k)
            if (e[k]) return -1;
        e.resize(bounds_.size());
    }
    e.resize(bounds_.size(), 0);
    for (std::size_t k = 0; k < e.size(); ++k)
        if (e[k] < 0 || e[k] >= (1 << bounds_[k])) return -1;
    return static_cast<long>(idx_.at(e));
}

const std::vector<std::size_t>& DualAlgebra::in_degree(int d) const {
    static const std::vector<std::size_t> none;
    auto it = by_deg_.find(d);
    return it == by_deg_.end() ? none : it->second;
}

std::vector<int> dual_bounds(int n) {
    if (n < 0) throw std::invalid_argument("oracle: A(n) needs n >= 0");
    std::vector<int> b;
    for (int k = n + 1; k >= 1; --k) b.push_back(k);
    return b;
}

Comodule trivial_comodule() { return {{0}, {}}; }

std::size_t CotorTable::dim(int s, int t) const {
    auto it = dims.find({s, t});
    if (it == dims.end()) throw std::out_of_range("cotor: bidegree outside the computed range");
    return it->second;
}

// ------------------------------------------------------------ injective resolution

namespace {

// a comodule cut into degrees lo..hi with coaction blocks per monomial
struct Graded {
    int lo = 0, hi = -1;
    std::vector<std::size_t> dim;
    // (degree, monomial) -> block from degree d to d - |m|
    std::map<std::pair<int, std::size_t>, BitMatrix> co;
    std::size_t at(int d) const { return d < lo || d > hi ? 0 : dim[d - lo]; }
};

Graded from_comodule(const DualAlgebra& G, const Comodule& M, int hi) {
    Graded N;
    if (M.degree.empty()) return N;
    N.lo = *std::min_element(M.degree.begin(), M.degree.end());
    N.hi = hi;
    N.dim.assign(hi - N.lo + 1, 0);
    std::vector<std::size_t> local(M.degree.size());
    for (std::size_t i = 0; i < M.degree.size(); ++i)
        if (M.degree[i] <= hi) local[i] = N.dim[M.degree[i] - N.lo]++;
    for (const auto& [e, mat] : M.coaction) {
        long b = G.index(e);
        if (b < 0) throw std::invalid_argument("oracle: coaction uses a monomial outside the dual algebra");
        int db = G.degree(b);
        for (std::size_t j = 0; j < M.degree.size(); ++j) {
            int d = M.degree[j];
            if (d > hi) continue;
            for (std::size_t i = 0; i < M.degree.size(); ++i) {
                if (!mat.get(i, j)) continue;
                if (M.degree[i] != d - db) throw std::invalid_argument("oracle: coaction does not preserve degree");
                auto key = std::make_pair(d, static_cast<std::size_t>(b));
                auto it = N.co.find(key);
                if (it == N.co.end()) it = N.co.emplace(key, BitMatrix(N.at(d - db), N.at(d))).first;
                it->second.set(local[i], local[j]);
            }
        }
    }
    return N;
}

// positions not occupied by pivots of e
std::vector<std::size_t> free_positions(const Echelon& e, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < n; ++q) {
        BitVec u = BitVec::unit(n, q);
        e.reduce(u);
        if (u.get(q) && u.count() == 1) out.push_back(q);
    }
    return out;
}

}  // namespace

CotorTable cotor(const std::vector<int>& bounds, const Comodule& M, int max_s, int max_stem, std::size_t budget) {
    if (max_s < 0 || max_stem < 0) throw std::invalid_argument("cotor: negative bound");
    if (max_s > 12 || max_stem > 30) throw BudgetExceeded("cotor: bounds beyond the oracle budget");
    DualAlgebra G(bounds);
    CotorTable out;
    out.max_s = max_s;
    out.max_stem = max_stem;
    int T = max_stem + max_s;
    if (M.degree.empty()) {
        for (int s = 0; s <= max_s; ++s)
            for (int t = s; t <= s + max_stem; ++t) out.dims[{s, t}] = 0;
        return out;
    }
    Graded N = from_comodule(G, M, T);
    for (int s = 0; s <= max_s; ++s) {
        int lo = N.lo, hi = N.hi;
        // primitives and a retraction onto them, degree by degree
        std::vector<std::vector<BitVec>> prim(hi - lo + 1);
        std::vector<BitMatrix> proj(hi - lo + 1);
        for (int d = lo; d <= hi; ++d) {
            std::size_t n = N.at(d);
            std::vector<BitVec> rows;
            for (int db = 1; db <= d - lo; ++db)
                for (std::size_t b : G.in_degree(db)) {
                    auto it = N.co.find({d, b});
                    if (it == N.co.end()) continue;
                    for (std::size_t r = 0; r < it->second.rows(); ++r) rows.push_back(it->second.row(r));
                }
            std::vector<BitVec> k;
            if (rows.empty()) {
                for (std::size_t i = 0; i < n; ++i) k.push_back(BitVec::unit(n, i));
            } else {
                k = kernel_basis(BitMatrix::from_rows(rows, n));
            }
            prim[d - lo] = k;
            if (s <= max_s && d - s >= 0 && d - s <= max_stem) out.dims[{s, d}] = k.size();
            // basis: primitives first, then unit vectors completing them
            Echelon e(n, 2 * n + 1);
            for (auto& v : k) e.add(v);
            for (std::size_t i = 0; i < n && e.rank() < n; ++i) e.add(BitVec::unit(n, i));
            BitMatrix p(k.size(), n);
            for (std::size_t i = 0; i < n; ++i) {
                auto c = e.express(BitVec::unit(n, i));
                for (std::size_t r = 0; r < k.size(); ++r)
                    if (c->get(r)) p.set(r, i);
            }
            proj[d - lo] = std::move(p);
        }
        for (int t = s; t <= s + max_stem; ++t)
            if (!out.dims.count({s, t})) out.dims[{s, t}] = 0;
        if (s == max_s) break;

        // I = Prim (x) Gamma; blocks ordered by (prim degree e, monomial, prim index)
        struct Slot {
            int e;
            std::size_t mono, offset;
        };
        std::vector<std::vector<Slot>> islots(hi - lo + 1);
        std::vector<std::size_t> idim(hi - lo + 1, 0);
        for (int d = lo; d <= hi; ++d)
            for (int e = lo; e <= d; ++e) {
                std::size_t pe = prim[e - lo].size();
                if (!pe) continue;
                for (std::size_t g : G.in_degree(d - e)) {
                    islots[d - lo].push_back({e, g, idim[d - lo]});
                    idim[d - lo] += pe;
                }
            }
        for (auto n : idim)
            if (n > budget) throw BudgetExceeded("cotor: injective term larger than the budget");
        auto slot_of = [&](int d, int e, std::size_t g) -> std::size_t {
            for (const auto& sl : islots[d - lo])
                if (sl.e == e && sl.mono == g) return sl.offset;
            throw std::logic_error("cotor: missing slot");
        };
        // the embedding N -> I and the image echelons
        std::vector<Echelon> image;
        for (int d = lo; d <= hi; ++d) {
            std::size_t n = N.at(d);
            Echelon e(idim[d - lo]);
            for (std::size_t j = 0; j < n; ++j) {
                BitVec v(idim[d - lo]);
                BitVec u = BitVec::unit(n, j);
                auto put = [&](int e0, std::size_t g, const BitVec& x) {
                    BitVec p = apply(proj[e0 - lo], x);
                    std::size_t off = slot_of(d, e0, g);
                    for (std::size_t r : p.ones()) v.flip(off + r);
                };
                if (!prim[d - lo].empty()) put(d, G.unit(), u);
                for (int db = 1; db <= d - lo; ++db)
                    for (std::size_t b : G.in_degree(db)) {
                        auto it = N.co.find({d, b});
                        if (it == N.co.end() || prim[d - db - lo].empty()) continue;
                        put(d - db, b, apply(it->second, u));
                    }
                if (v.none()) throw std::logic_error("cotor: embedding is not injective");
                e.add(v);
            }
            image.push_back(std::move(e));
        }
        // cokernel with the induced coaction
        Graded next;
        next.lo = lo;
        next.hi = hi;
        next.dim.assign(hi - lo + 1, 0);
        std::vector<std::vector<std::size_t>> keep(hi - lo + 1);
        std::vector<std::vector<long>> where(hi - lo + 1);
        for (int d = lo; d <= hi; ++d) {
            keep[d - lo] = free_positions(image[d - lo], idim[d - lo]);
            where[d - lo].assign(idim[d - lo], -1);
            for (std::size_t k = 0; k < keep[d - lo].size(); ++k) where[d - lo][keep[d - lo][k]] = static_cast<long>(k);
            next.dim[d - lo] = keep[d - lo].size();
        }
        for (int d = lo; d <= hi; ++d) {
            for (std::size_t k = 0; k < keep[d - lo].size(); ++k) {
                std::size_t q = keep[d - lo][k];
                const Slot* sl = nullptr;
                for (const auto& x : islots[d - lo])
                    if (q >= x.offset && q < x.offset + prim[x.e - lo].size()) sl = &x;
                std::size_t r = q - sl->offset;
                // p (x) g  ->  sum over psi(g) = g' (x) b of p (x) g'
                for (const auto& [gl, gr] : G.coproduct(sl->mono)) {
                    int db = G.degree(gr);
                    if (db == 0) continue;
                    int d2 = d - db;
                    if (d2 < lo) continue;
                    BitVec v(idim[d2 - lo]);
                    v.set(slot_of(d2, sl->e, gl) + r);
                    image[d2 - lo].reduce(v);
                    if (v.none()) continue;
                    auto key = std::make_pair(d, gr);
                    auto it = next.co.find(key);
                    if (it == next.co.end()) it = next.co.emplace(key, BitMatrix(next.at(d2), next.at(d))).first;
                    for (std::size_t x : v.ones()) it->second.flip(static_cast<std::size_t>(where[d2 - lo][x]), k);
                }
            }
        }
        N = std::move(next);
    }
    return out;
}

// ------------------------------------------------------------ literal cobar complex

CobarComplex::CobarComplex(const std::vector<int>& bounds, const Comodule& M, std::size_t budget)
    : G_(bounds), M_(M), budget_(budget) {}

std::vector<CobarComplex::Word> CobarComplex::basis(int s, int t) const {
    std::vector<Word> out;
    Word w(s + 1);
    // positive-degree monomials, indices 1.. in G_
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == s + 1) {
            if (left == 0) out.push_back(w);
            return;
        }
        int remaining = s + 1 - pos;  // each bar entry has degree >= 1
        for (std::size_t g = 1; g < G_.size(); ++g) {
            int dg = G_.degree(g);
            if (dg > left - (remaining - 1)) break;
            w[pos] = g;
            rec(pos + 1, left - dg);
        }
    };
    for (std::size_t m = 0; m < M_.degree.size(); ++m) {
        int left = t - M_.degree[m];
        if (left < s) continue;
        w[0] = m;
        rec(1, left);
        if (out.size() > budget_) throw BudgetExceeded("cobar: tensor space larger than the budget");
    }
    return out;
}

std::size_t CobarComplex::dim(int s, int t) const { return s < 0 ? 0 : basis(s, t).size(); }

BitMatrix CobarComplex::differential(int s, int t) const {
    auto src = basis(s, t), dst = basis(s + 1, t);
    std::map<Word, std::size_t> at;
    for (std::size_t i = 0; i < dst.size(); ++i) at[dst[i]] = i;
    BitMatrix d(dst.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c) {
        const Word& w = src[c];
        // coaction on the module factor, reduced
        for (const auto& [e, mat] : M_.coaction) {
            long g = G_.index(e);
            if (g <= 0) continue;
            for (std::size_t i = 0; i < M_.degree.size(); ++i) {
                if (!mat.get(i, w[0])) continue;
                Word x;
                x.push_back(i);
                x.push_back(static_cast<std::size_t>(g));
                x.insert(x.end(), w.begin() + 1, w.end());
                d.flip(at.at(x), c);
            }
        }
        // reduced coproduct on each bar entry
        for (int k = 1; k <= s; ++k)
            for (const auto& [a, b] : G_.coproduct(w[k])) {
                if (G_.degree(a) == 0 || G_.degree(b) == 0) continue;
                Word x(w.begin(), w.begin() + k);
                x.push_back(a);
                x.push_back(b);
                x.insert(x.end(), w.begin() + k + 1, w.end());
                d.flip(at.at(x), c);
            }
    }
    return d;
}

bool CobarComplex::check_d_squared(int s, int t) const {
    return multiply(differential(s + 1, t), differential(s, t)).is_zero();
}

std::size_t CobarComplex::cohomology(int s, int t) const {
    std::size_t n = dim(s, t);
    std::size_t z = n - rank(differential(s, t));
    std::size_t b = s == 0 ? 0 : rank(differential(s - 1, t));
    return z - b;
}

// ------------------------------------------------------------ Adem relations

namespace {

bool binom_odd(int n, int k) { return k >= 0 && n >= 0 && k <= n && (k & ~n) == 0; }

void straighten_into(SqWord w, std::map<SqWord, bool>& acc) {
    w.erase(std::remove(w.begin(), w.end(), 0), w.end());
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        int a = w[i], b = w[i + 1];
        if (a >= 2 * b) continue;
        // Sq^a Sq^b = sum_j C(b-j-1, a-2j) Sq^{a+b-j} Sq^j
        for (int j = 0; 2 * j <= a; ++j) {
            if (!binom_odd(b - j - 1, a - 2 * j)) continue;
            SqWord x(w.begin(), w.begin() + i);
            x.push_back(a + b - j);
            x.push_back(j);
            x.insert(x.end(), w.begin() + i + 2, w.end());
            straighten_into(x, acc);
        }
        return;
    }
    acc[w] = !acc[w];
}

}  // namespace

bool is_admissible(const SqWord& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] <= 0) return false;
        if (i + 1 < w.size() && w[i] < 2 * w[i + 1]) return false;
    }
    return true;
}

std::vector<SqWord> adem_straighten(const SqWord& w) {
    for (int a : w)
        if (a < 0) throw std::invalid_argument("adem: negative exponent");
    std::map<SqWord, bool> acc;
    straighten_into(w, acc);
    std::vector<SqWord> out;
    for (const auto& [x, on] : acc)
        if (on) out.push_back(x);
    return out;
}

std::vector<SqWord> admissible_basis(int degree, int max_length) {
    std::vector<SqWord> out;
    SqWord w;
    // last entry is at least 1 and each earlier entry is at least twice the next
    std::function<void(int, int)> rec = [&](int left, int cap) {
        if (left == 0) {
            SqWord r(w.rbegin(), w.rend());
            out.push_back(r);
            return;
        }
        if (static_cast<int>(w.size()) >= max_length) return;
        for (int a = cap; a <= left; ++a) {
            w.push_back(a);
            rec(left - a, 2 * a);
            w.pop_back();
        }
    };
    if (degree == 0) return {SqWord{}};
    rec(degree, 1);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace extforge::oracle
