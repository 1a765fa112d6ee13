#include "extforge/comod.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace extforge {

std::shared_ptr<const Algebra> shared_algebra(const Profile& p, int degree) {
    static std::mutex mu;
    static std::map<std::vector<int>, std::shared_ptr<Algebra>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[p.exponents];
    if (!slot) slot = std::make_shared<Algebra>(p, degree);
    if (slot->prepared_degree() < degree) slot->prepare(degree);
    return slot;
}

PoincareSeries shift(const PoincareSeries& p, int k) {
    PoincareSeries out;
    for (auto [d, c] : p) out[d + k] = c;
    return out;
}

static void prune(PoincareSeries& p) {
    for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
}

PoincareSeries add(const PoincareSeries& a, const PoincareSeries& b) {
    PoincareSeries out = a;
    for (auto [d, c] : b) out[d] += c;
    prune(out);
    return out;
}

PoincareSeries multiply(const PoincareSeries& a, const PoincareSeries& b) {
    PoincareSeries out;
    for (auto [d, c] : a)
        for (auto [e, f] : b) out[d + e] += c * f;
    prune(out);
    return out;
}

PoincareSeries truncate(const PoincareSeries& p, int max_degree) {
    PoincareSeries out;
    for (auto [d, c] : p)
        if (d <= max_degree) out[d] = c;
    return out;
}

// ---------------------------------------------------------------- FiniteModule

FiniteModule::FiniteModule(Profile p, std::vector<BasisElement> basis)
    : profile_(std::move(p)), basis_(std::move(basis)) {
    index();
}

void FiniteModule::index() {
    if (basis_.empty()) {
        lo_ = 0;
        hi_ = -1;
    } else {
        lo_ = hi_ = basis_[0].degree;
        for (auto& b : basis_) {
            lo_ = std::min(lo_, b.degree);
            hi_ = std::max(hi_, b.degree);
        }
    }
    int span = std::max(0, hi_ - lo_);
    alg_ = shared_algebra(profile_, span);
    by_degree_.assign(std::max(0, hi_ - lo_ + 1), {});
    local_.assign(basis_.size(), 0);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        auto& v = by_degree_[basis_[k].degree - lo_];
        local_[k] = static_cast<int>(v.size());
        v.push_back(static_cast<int>(k));
    }
    blocks_.assign(span + 1, {});
    for (int a = 0; a <= span; ++a) blocks_[a].assign(alg_->dim(a), std::vector<std::optional<BitMatrix>>(by_degree_.size()));
}

const std::vector<int>& FiniteModule::in_degree(int d) const {
    static const std::vector<int> empty;
    if (d < lo_ || d > hi_) return empty;
    return by_degree_[d - lo_];
}

PoincareSeries FiniteModule::poincare() const {
    PoincareSeries p;
    for (auto& b : basis_) p[b.degree]++;
    return p;
}

const BitMatrix* FiniteModule::block(int a, int i, int d) const {
    if (a < 0 || a >= static_cast<int>(blocks_.size())) return nullptr;
    if (d < lo_ || d > hi_ || d - a < lo_) return nullptr;
    if (a == 0) {
        static thread_local std::map<std::size_t, BitMatrix> ids;
        std::size_t n = in_degree(d).size();
        auto it = ids.find(n);
        if (it == ids.end()) it = ids.emplace(n, BitMatrix::identity(n)).first;
        return &it->second;
    }
    const auto& slot = blocks_[a][i][d - lo_];
    return slot ? &*slot : nullptr;
}

BitMatrix FiniteModule::action(int a, int i) const {
    BitMatrix m(dim(), dim());
    if (a == 0) return BitMatrix::identity(dim());
    for (int d = lo_; d <= hi_; ++d) {
        const BitMatrix* b = block(a, i, d);
        if (!b) continue;
        const auto& src = in_degree(d);
        const auto& dst = in_degree(d - a);
        for (std::size_t r = 0; r < b->rows(); ++r)
            for (std::size_t c = 0; c < b->cols(); ++c)
                if (b->get(r, c)) m.set(dst[r], src[c]);
    }
    return m;
}

BitMatrix FiniteModule::action(const Exponents& r) const {
    int a = milnor_degree(r);
    if (a > hi_ - lo_ && a > 0) return BitMatrix(dim(), dim());
    int i = alg_->index_of(r);
    if (i < 0) throw std::invalid_argument("not in algebra: " + format_sq(r));
    return action(a, i);
}

void FiniteModule::set_action(int a, int i, const BitMatrix& full) {
    if (a <= 0) throw std::invalid_argument("set_action: degree must be positive");
    if (a >= static_cast<int>(blocks_.size())) {
        if (!full.is_zero()) throw std::invalid_argument("set_action: action exceeds the degree span");
        return;
    }
    for (int d = lo_; d <= hi_; ++d) {
        const auto& src = in_degree(d);
        if (src.empty()) continue;
        const auto& dst = in_degree(d - a);
        BitMatrix b(dst.size(), src.size());
        bool any = false;
        for (std::size_t c = 0; c < src.size(); ++c)
            for (std::size_t r = 0; r < dst.size(); ++r)
                if (full.get(dst[r], src[c])) {
                    b.set(r, c);
                    any = true;
                }
        blocks_[a][i][d - lo_] = any ? std::optional<BitMatrix>(std::move(b)) : std::nullopt;
    }
    // nothing may leave the degree pattern
    for (std::size_t c = 0; c < dim(); ++c)
        for (std::size_t r = 0; r < dim(); ++r)
            if (full.get(r, c) && basis_[r].degree != basis_[c].degree - a)
                throw std::invalid_argument("set_action: entry does not lower degree by " + std::to_string(a));
}

bool FiniteModule::is_valid(std::string* why) const {
    int span = hi_ - lo_;
    for (int a = 1; a <= span; ++a)
        for (int b = 1; a + b <= span; ++b)
            for (std::size_t i = 0; i < alg_->dim(a); ++i)
                for (std::size_t j = 0; j < alg_->dim(b); ++j) {
                    const auto& prod = alg_->product(a, i, b, j);
                    for (int d = lo_ + a + b; d <= hi_; ++d) {
                        std::size_t rows = in_degree(d - a - b).size(), cols = in_degree(d).size();
                        if (!rows || !cols) continue;
                        BitMatrix lhs(rows, cols);
                        const BitMatrix* y = block(b, j, d);
                        const BitMatrix* x = block(a, i, d - b);
                        if (x && y) lhs = extforge::multiply(*x, *y);
                        BitMatrix rhs(rows, cols);
                        for (int k : prod) {
                            const BitMatrix* z = block(a + b, k, d);
                            if (!z) continue;
                            for (std::size_t r = 0; r < rows; ++r)
                                for (std::size_t w = 0; w < rhs.stride(); ++w) rhs.row_data(r)[w] ^= z->row_data(r)[w];
                        }
                        if (lhs != rhs) {
                            if (why) {
                                std::ostringstream os;
                                os << format_sq(alg_->basis(a)[i]) << " * " << format_sq(alg_->basis(b)[j])
                                   << " acts inconsistently on degree " << d;
                                *why = os.str();
                            }
                            return false;
                        }
                    }
                }
    return true;
}

// ---------------------------------------------------------------- constructors

namespace {

std::vector<int> canonical_perm(const std::vector<BasisElement>& b) {
    std::vector<int> perm(b.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int x, int y) {
        if (b[x].degree != b[y].degree) return b[x].degree < b[y].degree;
        return b[x].label < b[y].label;
    });
    return perm;
}

// builds a module from actions given as a callback on full matrices
template <class F>
FiniteModule build(const Profile& p, std::vector<BasisElement> basis, const std::string& name, F&& act) {
    FiniteModule m(p, std::move(basis));
    m.name = name;
    int span = m.max_degree() - m.min_degree();
    for (int a = 1; a <= span; ++a)
        for (std::size_t i = 0; i < m.algebra().dim(a); ++i) m.set_action(a, static_cast<int>(i), act(a, static_cast<int>(i)));
    return m;
}

BitMatrix permute_matrix(const BitMatrix& full, const std::vector<int>& perm) {
    // new index k corresponds to old perm[k]
    BitMatrix out(full.rows(), full.cols());
    for (std::size_t r = 0; r < perm.size(); ++r)
        for (std::size_t c = 0; c < perm.size(); ++c)
            if (full.get(perm[r], perm[c])) out.set(r, c);
    return out;
}

}  // namespace

FiniteModule trivial(const Profile& p) {
    FiniteModule m(p, {{"()", 0, 0}});
    m.name = "f2";
    return m;
}

FiniteModule suspend(const FiniteModule& m, int k) {
    std::vector<BasisElement> b = m.basis();
    for (auto& e : b) e.degree += k;
    FiniteModule out = build(m.profile(), b, k ? "S" + std::to_string(k) + " " + m.name : m.name,
                             [&](int a, int i) { return m.action(a, i); });
    out.valid_below = m.valid_below ? std::optional<int>(*m.valid_below + k) : std::nullopt;
    return out;
}

FiniteModule direct_sum(const FiniteModule& m, const FiniteModule& n) {
    if (m.profile() != n.profile()) throw std::invalid_argument("direct_sum: algebra mismatch");
    std::vector<BasisElement> b;
    for (auto e : m.basis()) b.push_back({"0:" + e.label, e.degree, e.weight});
    for (auto e : n.basis()) b.push_back({"1:" + e.label, e.degree, e.weight});
    std::vector<int> perm = canonical_perm(b);
    std::vector<BasisElement> sorted;
    for (int k : perm) sorted.push_back(b[k]);
    std::size_t dm = m.dim();
    return build(m.profile(), sorted, m.name + " + " + n.name, [&](int a, int i) {
        BitMatrix full(b.size(), b.size());
        if (a <= m.max_degree() - m.min_degree()) {
            BitMatrix x = m.action(a, i);
            for (std::size_t r = 0; r < dm; ++r)
                for (std::size_t c = 0; c < dm; ++c)
                    if (x.get(r, c)) full.set(r, c);
        }
        if (a <= n.max_degree() - n.min_degree()) {
            BitMatrix y = n.action(a, i);
            for (std::size_t r = 0; r < n.dim(); ++r)
                for (std::size_t c = 0; c < n.dim(); ++c)
                    if (y.get(r, c)) full.set(dm + r, dm + c);
        }
        return permute_matrix(full, perm);
    });
}

FiniteModule tensor(const FiniteModule& m, const FiniteModule& n) {
    if (m.profile() != n.profile()) throw std::invalid_argument("tensor: algebra mismatch");
    std::vector<BasisElement> b;
    for (auto& x : m.basis())
        for (auto& y : n.basis()) {
            std::optional<int> w;
            if (x.weight && y.weight) w = *x.weight + *y.weight;
            b.push_back({x.label + "⊗" + y.label, x.degree + y.degree, w});
        }
    std::vector<int> perm = canonical_perm(b);
    std::vector<BasisElement> sorted;
    for (int k : perm) sorted.push_back(b[k]);
    std::size_t dn = n.dim();
    const Algebra& alg = m.algebra();
    int span_m = m.max_degree() - m.min_degree(), span_n = n.max_degree() - n.min_degree();
    FiniteModule out = build(m.profile(), sorted, m.name + " ⊗ " + n.name, [&](int a, int i) {
        BitMatrix full(b.size(), b.size());
        // Cartan formula through the Milnor coproduct
        for (auto& [l, r] : coproduct(alg.basis(a)[i])) {
            int dl = milnor_degree(l), dr = milnor_degree(r);
            if (dl > span_m || dr > span_n) continue;
            BitMatrix x = m.action(l), y = n.action(r);
            if (x.is_zero() || y.is_zero()) continue;
            for (std::size_t p = 0; p < m.dim(); ++p) {
                auto xs = x.column(p).ones();
                if (xs.empty()) continue;
                for (std::size_t q = 0; q < dn; ++q) {
                    auto ys = y.column(q).ones();
                    for (std::size_t p2 : xs)
                        for (std::size_t q2 : ys) full.flip(p2 * dn + q2, p * dn + q);
                }
            }
        }
        return permute_matrix(full, perm);
    });
    if (m.valid_below || n.valid_below) {
        // the truncated factor bounds what the product can be trusted for
        int v = 1 << 30;
        if (m.valid_below) v = std::min(v, *m.valid_below + n.min_degree());
        if (n.valid_below) v = std::min(v, *n.valid_below + m.min_degree());
        out.valid_below = v;
    }
    return out;
}

FiniteModule dualize(const FiniteModule& m) {
    int s = m.max_degree();
    std::vector<BasisElement> b;
    for (auto& e : m.basis()) b.push_back({"D" + e.label, s - e.degree, e.weight});
    std::vector<int> perm = canonical_perm(b);
    std::vector<BasisElement> sorted;
    for (int k : perm) sorted.push_back(b[k]);
    const Algebra& alg = m.algebra();
    FiniteModule out = build(m.profile(), sorted, "D(" + m.name + ")", [&](int a, int i) {
        // (a.phi)(x) = phi(chi(a).x)
        BitMatrix acc(m.dim(), m.dim());
        for (std::size_t k : alg.conjugate(a, i).ones()) {
            BitMatrix x = m.action(a, static_cast<int>(k));
            for (std::size_t r = 0; r < m.dim(); ++r)
                for (std::size_t w = 0; w < acc.stride(); ++w) acc.row_data(r)[w] ^= x.row_data(r)[w];
        }
        return permute_matrix(acc.transpose(), perm);
    });
    out.dual_shift = s;
    return out;
}

FiniteModule permute_basis(const FiniteModule& m, const std::vector<int>& perm, const std::string& label_prefix) {
    if (perm.size() != m.dim()) throw std::invalid_argument("permute_basis: wrong permutation size");
    std::vector<BasisElement> b;
    for (int k : perm) {
        BasisElement e = m.basis()[k];
        e.label = label_prefix + e.label;
        b.push_back(e);
    }
    FiniteModule out = build(m.profile(), b, m.name, [&](int a, int i) { return permute_matrix(m.action(a, i), perm); });
    out.valid_below = m.valid_below;
    return out;
}

FiniteModule from_generator_actions(const Profile& p, std::vector<BasisElement> basis,
                                    const std::map<int, BitMatrix>& gens) {
    FiniteModule m(p, std::move(basis));
    const Algebra& alg = m.algebra();
    int span = m.max_degree() - m.min_degree();
    std::size_t n = m.dim();
    // full action matrices per algebra degree, filled bottom-up
    std::vector<std::vector<BitMatrix>> full(span + 1);
    full[0] = {BitMatrix::identity(n)};
    for (int a = 1; a <= span; ++a) {
        std::size_t da = alg.dim(a);
        full[a].assign(da, BitMatrix(n, n));
        // express each basis element of degree a through Sq(2^k) * (lower basis element)
        struct Src { int gen_deg; int low_deg; int low_idx; };
        std::vector<Src> srcs;
        Echelon ech(da, 4096);
        for (int g = 1; g <= a; g <<= 1) {
            if (alg.index_of({g}) < 0) continue;
            int low = a - g;
            for (std::size_t j = 0; j < alg.dim(low); ++j) {
                BitVec v(da);
                for (int k : alg.product(g, alg.index_of({g}), low, static_cast<int>(j))) v.flip(k);
                ech.add(v);
                srcs.push_back({g, low, static_cast<int>(j)});
            }
        }
        for (std::size_t i = 0; i < da; ++i) {
            auto combo = ech.express(BitVec::unit(da, i));
            if (!combo) throw std::logic_error("algebra not generated by the Sq(2^k) in degree " + std::to_string(a));
            BitMatrix acc(n, n);
            for (std::size_t s : combo->ones()) {
                const Src& src = srcs[s];
                auto it = gens.find(src.gen_deg);
                if (it == gens.end()) continue;
                BitMatrix prod = multiply(it->second, full[src.low_deg][src.low_idx]);
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t w = 0; w < acc.stride(); ++w) acc.row_data(r)[w] ^= prod.row_data(r)[w];
            }
            full[a][i] = acc;
            m.set_action(a, static_cast<int>(i), acc);
        }
    }
    return m;
}

// ---------------------------------------------------------------- monomial comodules

std::string monomial_label(const Exponents& e) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
    os << ")";
    return os.str();
}

static Exponents add_exponents(const Exponents& a, const Exponents& b) {
    Exponents c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

static bool within(const Profile& p, const Exponents& e) {
    if (p.is_full()) return true;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] >= (1 << p.bound(i))) return false;
    return true;
}

std::vector<std::pair<Exponents, Exponents>> dual_coaction(const Exponents& e, const Profile& acting,
                                                           const Profile& ambient) {
    using Term = std::pair<Exponents, Exponents>;
    std::map<Term, char> cur{{Term{{}, {}}, 1}};
    for (std::size_t k1 = 0; k1 < e.size(); ++k1) {
        int k = static_cast<int>(k1) + 1;
        for (int j = 0; (e[k1] >> j) > 0; ++j) {
            if (!((e[k1] >> j) & 1)) continue;
            // psi(xi_k)^(2^j) = sum_i xi_{k-i}^(2^(i+j)) (x) xi_i^(2^j)
            std::vector<Term> factor;
            for (int i = 0; i <= k; ++i) {
                Exponents l, r;
                if (k - i >= 1) {
                    l.assign(k - i, 0);
                    l[k - i - 1] = 1 << (i + j);
                }
                if (i >= 1) {
                    r.assign(i, 0);
                    r[i - 1] = 1 << j;
                }
                factor.emplace_back(l, r);
            }
            std::map<Term, char> next;
            for (auto& [t, c] : cur) {
                if (!c) continue;
                for (auto& [l, r] : factor) {
                    Exponents nr = add_exponents(t.second, r);
                    if (!within(acting, nr)) continue;
                    Exponents nl = add_exponents(t.first, l);
                    if (!within(ambient, nl)) continue;
                    next[{nl, nr}] ^= 1;
                }
            }
            cur.swap(next);
        }
    }
    std::vector<std::pair<Exponents, Exponents>> out;
    for (auto& [t, c] : cur) {
        if (!c) continue;
        Exponents l = t.first, r = t.second;
        trim(l);
        trim(r);
        out.emplace_back(l, r);
    }
    return out;
}

std::vector<Exponents> filtered_monomials(const MonomialFilter& f) {
    if (!f.max_weight && !f.max_degree && f.ambient.is_full())
        throw std::invalid_argument("filtered_monomials: unbounded filter");
    int kmax = 0;
    for (int k = 1;; ++k) {
        bool ok = true;
        if (f.max_weight && (1 << (k - 1)) > *f.max_weight) ok = false;
        if (f.max_degree && (1 << k) - 1 > *f.max_degree) ok = false;
        if (!f.ambient.is_full() && k > static_cast<int>(f.ambient.exponents.size())) ok = false;
        if (!ok) break;
        kmax = k;
    }
    std::vector<Exponents> out;
    Exponents e(kmax, 0);
    std::function<void(int, int, int)> rec = [&](int k, int weight, int degree) {
        if (k > kmax) {
            Exponents t = e;
            trim(t);
            if (f.drop_unit && t.empty()) return;
            out.push_back(t);
            return;
        }
        int step = 1 << (k - 1 < static_cast<int>(f.divisibility.size()) ? f.divisibility[k - 1] : 0);
        int w = 1 << (k - 1), d = (1 << k) - 1;
        for (int v = 0;; v += step) {
            if (f.max_weight && weight + v * w > *f.max_weight) break;
            if (f.max_degree && degree + v * d > *f.max_degree) break;
            if (!f.ambient.is_full() && v >= (1 << f.ambient.bound(k - 1))) break;
            e[k - 1] = v;
            rec(k + 1, weight + v * w, degree + v * d);
        }
        e[k - 1] = 0;
    };
    rec(1, 0, 0);
    std::sort(out.begin(), out.end(), [](const Exponents& a, const Exponents& b) {
        int da = milnor_degree(a), db = milnor_degree(b);
        if (da != db) return da < db;
        return monomial_label(a) < monomial_label(b);
    });
    return out;
}

FiniteModule monomial_module(const MonomialFilter& f, const std::string& name) {
    std::vector<Exponents> monos = filtered_monomials(f);
    std::vector<BasisElement> basis;
    std::map<Exponents, int> pos;
    for (std::size_t k = 0; k < monos.size(); ++k) {
        basis.push_back({monomial_label(monos[k]), milnor_degree(monos[k]), dual_weight(monos[k])});
        pos[monos[k]] = static_cast<int>(k);
    }
    FiniteModule m(f.acting, basis);
    m.name = name;
    const Algebra& alg = m.algebra();
    int span = m.max_degree() - m.min_degree();
    std::map<std::pair<int, int>, BitMatrix> acts;
    for (std::size_t k = 0; k < monos.size(); ++k) {
        for (auto& [l, r] : dual_coaction(monos[k], f.acting, f.ambient)) {
            if (r.empty()) continue;
            if (l.empty() && f.drop_unit) continue;
            auto it = pos.find(l);
            if (it == pos.end())
                throw std::logic_error("monomial span not closed under the coaction: " + monomial_label(monos[k]) +
                                       " -> " + monomial_label(l));
            int a = milnor_degree(r);
            if (a > span) throw std::logic_error("coaction term beyond the degree span");
            int i = alg.index_of(r);
            auto& mat = acts.try_emplace({a, i}, monos.size(), monos.size()).first->second;
            mat.flip(it->second, k);
        }
    }
    for (auto& [key, mat] : acts) m.set_action(key.first, key.second, mat);
    return m;
}

FiniteModule bo(int i, const Profile& acting) {
    if (i < 0) throw std::invalid_argument("bo: index must be >= 0");
    MonomialFilter f;
    f.acting = acting;
    f.divisibility = {2, 1};
    f.max_weight = 4 * i;
    return monomial_module(f, "bo:" + std::to_string(i));
}

FiniteModule tmf_bg(int j, const Profile& acting) {
    if (j < 0) throw std::invalid_argument("tmf_bg: index must be >= 0");
    MonomialFilter f;
    f.acting = acting;
    f.divisibility = {3, 2, 1};
    f.max_weight = 8 * j;
    return monomial_module(f, "tmfbg:" + std::to_string(j));
}

FiniteModule quotient_hopf_module(const Profile& big, const Profile& small) {
    if (big.is_full() || small.is_full()) throw std::invalid_argument("quotient_hopf_module: profiles must be finite");
    if (!big.contains(small)) throw std::invalid_argument("quotient_hopf_module: " + small.name() + " is not inside " + big.name());
    MonomialFilter f;
    f.acting = big;
    f.ambient = big;
    f.divisibility = small.exponents;
    return monomial_module(f, big.name() + "//" + small.name());
}

FiniteModule abar_truncation(int max_degree, int margin, const Profile& acting) {
    if (max_degree < 8) throw std::invalid_argument("abar_truncation: max_degree must be >= 8");
    MonomialFilter f;
    f.acting = acting;
    f.divisibility = {3, 2, 1};
    f.max_degree = max_degree;
    f.drop_unit = true;
    FiniteModule m = monomial_module(f, "abar:" + std::to_string(max_degree));
    m.valid_below = max_degree - margin;
    return m;
}

static PoincareSeries series_of(const MonomialFilter& f) {
    PoincareSeries p;
    for (auto& e : filtered_monomials(f)) p[milnor_degree(e)]++;
    return p;
}

PoincareSeries bo_series(int i) {
    MonomialFilter f;
    f.divisibility = {2, 1};
    f.max_weight = 4 * i;
    return series_of(f);
}

PoincareSeries tmf_series(int j) {
    MonomialFilter f;
    f.divisibility = {3, 2, 1};
    f.max_weight = 8 * j;
    return series_of(f);
}

Report verify_splitting(int max_degree) {
    Report rep;
    MonomialFilter f;
    f.divisibility = {3, 2, 1};
    f.max_degree = max_degree;
    f.drop_unit = true;
    PoincareSeries lhs = series_of(f);
    PoincareSeries rhs;
    for (int i = 1; 8 * i <= max_degree; ++i) rhs = add(rhs, shift(bo_series(i), 8 * i));
    rhs = truncate(rhs, max_degree);
    for (int d = 0; d <= max_degree; ++d) {
        long a = lhs.count(d) ? lhs.at(d) : 0, b = rhs.count(d) ? rhs.at(d) : 0;
        if (a != b) {
            rep.fail("degree " + std::to_string(d) + ": abar has " + std::to_string(a) + ", sum of bo has " + std::to_string(b));
            return rep;
        }
    }
    long total = 0;
    for (auto [d, c] : lhs) total += c;
    rep.note("splitting holds through degree " + std::to_string(max_degree) + " (" + std::to_string(total) + " monomials)");
    return rep;
}

static PoincareSeries negate(PoincareSeries p) {
    for (auto& [d, c] : p) c = -c;
    return p;
}

Report verify_bo_sequence(int j) {
    if (j < 1) throw std::invalid_argument("verify_bo_sequence: j must be >= 1");
    Report rep;
    PoincareSeries q = quotient_hopf_module(Profile::A(2), Profile::A(1)).poincare();
    PoincareSeries a1_term = multiply(q, tmf_series(j - 1));

    PoincareSeries even = shift(bo_series(j), 8 * j);
    even = add(even, negate(bo_series(2 * j)));
    even = add(even, a1_term);
    even = add(even, negate(shift(bo_series(j - 1), 8 * j + 9)));
    if (even.empty())
        rep.note("even sequence j=" + std::to_string(j) + " holds");
    else
        rep.fail("even sequence j=" + std::to_string(j) + " leaves degree " + std::to_string(even.begin()->first));

    PoincareSeries odd = multiply(shift(bo_series(j), 8 * j), bo_series(1));
    odd = add(odd, negate(bo_series(2 * j + 1)));
    odd = add(odd, a1_term);
    if (odd.empty())
        rep.note("odd sequence j=" + std::to_string(j) + " holds");
    else
        rep.fail("odd sequence j=" + std::to_string(j) + " leaves degree " + std::to_string(odd.begin()->first));
    return rep;
}

bool preserves_weight_filtration(const FiniteModule& m) {
    int span = m.max_degree() - m.min_degree();
    for (int a = 1; a <= span; ++a)
        for (std::size_t i = 0; i < m.algebra().dim(a); ++i) {
            BitMatrix x = m.action(a, static_cast<int>(i));
            for (std::size_t r = 0; r < m.dim(); ++r)
                for (std::size_t c = 0; c < m.dim(); ++c)
                    if (x.get(r, c)) {
                        auto wr = m.basis()[r].weight, wc = m.basis()[c].weight;
                        if (!wr || !wc || *wr > *wc) return false;
                    }
        }
    return true;
}

// ---------------------------------------------------------------- JSON

nlohmann::json dump_module(const FiniteModule& m) {
    nlohmann::json j;
    j["format"] = "ext-forge-module";
    j["version"] = 1;
    j["algebra"] = m.profile().name();
    j["name"] = m.name;
    if (m.valid_below) j["valid_below"] = *m.valid_below;
    auto& basis = j["basis"] = nlohmann::json::array();
    for (auto& e : m.basis())
        basis.push_back({e.label, e.degree, e.weight ? nlohmann::json(*e.weight) : nlohmann::json(nullptr)});
    auto& acts = j["actions"] = nlohmann::json::object();
    for (auto& g : m.algebra().generators()) {
        if (g[0] > m.max_degree() - m.min_degree()) continue;
        BitMatrix x = m.action(g);
        auto rows = nlohmann::json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) {
            auto out = x.column(c).ones();
            if (!out.empty()) rows.push_back({c, out});
        }
        acts[format_sq(g)] = rows;
    }
    return j;
}

FiniteModule load_module(const nlohmann::json& j) {
    if (j.value("format", "") != "ext-forge-module") throw std::invalid_argument("not an ext-forge module document");
    if (j.value("version", 0) != 1) throw std::invalid_argument("unsupported module format version");
    Profile p = Profile::parse(j.at("algebra").get<std::string>());
    std::vector<BasisElement> basis;
    for (auto& e : j.at("basis")) {
        BasisElement b{e.at(0).get<std::string>(), e.at(1).get<int>(), std::nullopt};
        if (!e.at(2).is_null()) b.weight = e.at(2).get<int>();
        basis.push_back(b);
    }
    std::map<int, BitMatrix> gens;
    for (auto& [key, rows] : j.at("actions").items()) {
        // key is Sq(2^k)
        int deg = std::stoi(key.substr(3));
        BitMatrix mat(basis.size(), basis.size());
        for (auto& entry : rows) {
            std::size_t c = entry.at(0).get<std::size_t>();
            for (auto& r : entry.at(1)) mat.set(r.get<std::size_t>(), c);
        }
        gens[deg] = mat;
    }
    FiniteModule m = from_generator_actions(p, basis, gens);
    m.name = j.value("name", "");
    if (j.contains("valid_below")) m.valid_below = j.at("valid_below").get<int>();
    return m;
}

}  // namespace extforge
