#include "extforge/hopf.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace extforge {

void trim(Exponents& r) {
    while (!r.empty() && r.back() == 0) r.pop_back();
}

int milnor_degree(const Exponents& r) {
    int d = 0;
    for (std::size_t i = 0; i < r.size(); ++i) d += r[i] * ((1 << (i + 1)) - 1);
    return d;
}

int dual_weight(const Exponents& e) {
    int w = 0;
    for (std::size_t i = 0; i < e.size(); ++i) w += e[i] << i;
    return w;
}

bool canonical_less(const Exponents& a, const Exponents& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

std::string format_sq(const Exponents& r) {
    std::ostringstream os;
    os << "Sq(";
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << ")";
    return os.str();
}

Profile Profile::A(int n) {
    if (n < 0) throw std::invalid_argument("A(n) needs n >= 0");
    Profile p;
    for (int i = n + 1; i >= 1; --i) p.exponents.push_back(i);
    return p;
}

Profile Profile::parse(const std::string& name) {
    if (name == "A") return full();
    if (name.size() == 2 && name[0] == 'A' && name[1] >= '0' && name[1] <= '3') return A(name[1] - '0');
    throw std::invalid_argument("unknown algebra '" + name + "' (expected A0, A1, A2, A3 or A)");
}

int Profile::bound(std::size_t i) const {
    if (is_full()) return -1;
    return i < exponents.size() ? exponents[i] : 0;
}

bool Profile::admits(const Exponents& r) const {
    if (is_full()) return true;
    for (std::size_t i = 0; i < r.size(); ++i) {
        int b = bound(i);
        if (r[i] >= (1 << b)) return false;
    }
    return true;
}

bool Profile::contains(const Profile& small) const {
    if (is_full()) return true;
    if (small.is_full()) return false;
    for (std::size_t i = 0; i < std::max(exponents.size(), small.exponents.size()); ++i)
        if (small.bound(i) > bound(i)) return false;
    return true;
}

int Profile::top_degree() const {
    if (is_full()) return -1;
    int d = 0;
    for (std::size_t i = 0; i < exponents.size(); ++i) d += ((1 << exponents[i]) - 1) * ((1 << (i + 1)) - 1);
    return d;
}

std::size_t Profile::dimension() const {
    if (is_full()) return 0;
    std::size_t d = 1;
    for (int e : exponents) d <<= e;
    return d;
}

std::string Profile::name() const {
    if (is_full()) return "A";
    for (int n = 0; n <= 6; ++n)
        if (*this == A(n)) return "A" + std::to_string(n);
    std::ostringstream os;
    os << "P(";
    for (std::size_t i = 0; i < exponents.size(); ++i) os << (i ? "," : "") << exponents[i];
    os << ")";
    return os.str();
}

MilnorElement::MilnorElement(std::vector<Exponents> t) {
    for (auto& r : t) trim(r);
    std::sort(t.begin(), t.end(), canonical_less);
    for (std::size_t i = 0; i < t.size();) {
        std::size_t j = i;
        while (j < t.size() && t[j] == t[i]) ++j;
        if ((j - i) & 1) terms.push_back(t[i]);
        i = j;
    }
}

int MilnorElement::degree() const { return terms.empty() ? -1 : milnor_degree(terms.front()); }

MilnorElement& MilnorElement::operator+=(const MilnorElement& o) {
    std::vector<Exponents> all = terms;
    all.insert(all.end(), o.terms.begin(), o.terms.end());
    *this = MilnorElement(std::move(all));
    return *this;
}

std::string MilnorElement::to_string() const {
    if (terms.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? " + " : "") + format_sq(terms[i]);
    return s;
}

std::vector<Exponents> basis_in_degree(const Profile& p, int n) {
    std::vector<Exponents> out;
    if (n < 0) return out;
    int kmax = 0;
    while (((1 << (kmax + 1)) - 1) <= n) ++kmax;
    Exponents r(kmax, 0);
    // fill r_k down to r_1
    std::function<void(int, int)> rec = [&](int k, int left) {
        if (k == 0) {
            if (left == 0) {
                Exponents t = r;
                trim(t);
                if (p.admits(t)) out.push_back(t);
            }
            return;
        }
        int w = (1 << k) - 1;
        int b = p.bound(k - 1);
        int cap = left / w;
        if (b >= 0) cap = std::min(cap, (1 << b) - 1);
        for (int v = 0; v <= cap; ++v) {
            r[k - 1] = v;
            rec(k - 1, left - v * w);
        }
        r[k - 1] = 0;
    };
    rec(kmax, n);
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

MilnorElement milnor_product(const Exponents& r, const Exponents& s) {
    const int m = static_cast<int>(r.size());
    const int n = static_cast<int>(s.size());
    // x[i][j] for 1<=i<=m, 1<=j<=n is free; row 0 and column 0 are determined
    std::vector<std::vector<int>> x(m + 1, std::vector<int>(n + 1, 0));
    std::vector<int> row_left(r.begin(), r.end());  // r_i - sum_j 2^j x_ij
    std::vector<int> col_left(s.begin(), s.end());  // s_j - sum_i x_ij
    std::map<Exponents, int> acc;

    auto finish = [&]() {
        for (int i = 1; i <= m; ++i) x[i][0] = row_left[i - 1];
        for (int j = 1; j <= n; ++j) x[0][j] = col_left[j - 1];
        Exponents t(m + n, 0);
        for (int d = 1; d <= m + n; ++d) {
            int seen = 0;
            int sum = 0;
            for (int i = std::max(0, d - n); i <= std::min(d, m); ++i) {
                int v = x[i][d - i];
                if (seen & v) return;  // multinomial coefficient even
                seen |= v;
                sum += v;
            }
            t[d - 1] = sum;
        }
        trim(t);
        acc[t] ^= 1;
    };

    std::function<void(int, int)> rec = [&](int i, int j) {
        if (i > m) {
            finish();
            return;
        }
        if (j > n) {
            rec(i + 1, 1);
            return;
        }
        int w = 1 << j;
        int cap = std::min(row_left[i - 1] / w, col_left[j - 1]);
        for (int v = 0; v <= cap; ++v) {
            x[i][j] = v;
            row_left[i - 1] -= v * w;
            col_left[j - 1] -= v;
            rec(i, j + 1);
            row_left[i - 1] += v * w;
            col_left[j - 1] += v;
        }
        x[i][j] = 0;
    };
    rec(1, 1);

    std::vector<Exponents> terms;
    for (auto& [t, c] : acc)
        if (c) terms.push_back(t);
    return MilnorElement(std::move(terms));
}

MilnorElement milnor_product(const MilnorElement& a, const MilnorElement& b) {
    MilnorElement out;
    std::vector<Exponents> all;
    for (const auto& r : a.terms)
        for (const auto& s : b.terms) {
            MilnorElement p = milnor_product(r, s);
            all.insert(all.end(), p.terms.begin(), p.terms.end());
        }
    return MilnorElement(std::move(all));
}

std::vector<std::pair<Exponents, Exponents>> coproduct(const Exponents& r) {
    std::vector<std::pair<Exponents, Exponents>> out;
    Exponents a(r.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == r.size()) {
            Exponents left = a, right(r.size());
            for (std::size_t k = 0; k < r.size(); ++k) right[k] = r[k] - a[k];
            trim(left);
            trim(right);
            out.emplace_back(std::move(left), std::move(right));
            return;
        }
        for (int v = 0; v <= r[i]; ++v) {
            a[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

bool dual_pairing(const Exponents& sq, const Exponents& xi) {
    Exponents a = sq, b = xi;
    trim(a);
    trim(b);
    return a == b;
}

Algebra::Algebra(Profile p, int max_degree) : profile_(std::move(p)) { prepare(max_degree); }

void Algebra::prepare(int max_degree) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!profile_.is_full()) max_degree = std::max(max_degree, profile_.top_degree());
    for (int n = prepared_ + 1; n <= max_degree; ++n) {
        bases_.push_back(basis_in_degree(profile_, n));
        const auto& b = bases_.back();
        for (std::size_t i = 0; i < b.size(); ++i) index_[b[i]] = static_cast<int>(i);
    }
    prepared_ = std::max(prepared_, max_degree);
}

std::size_t Algebra::dim(int n) const {
    if (n < 0) return 0;
    if (!profile_.is_full() && n > profile_.top_degree()) return 0;
    if (n > prepared_) throw std::out_of_range("Algebra degree " + std::to_string(n) + " not prepared");
    return bases_[n].size();
}

const std::vector<Exponents>& Algebra::basis(int n) const {
    static const std::vector<Exponents> empty;
    if (n < 0) return empty;
    if (!profile_.is_full() && n > profile_.top_degree()) return empty;
    if (n > prepared_) throw std::out_of_range("Algebra degree " + std::to_string(n) + " not prepared");
    return bases_[n];
}

int Algebra::index_of(const Exponents& r) const {
    auto it = index_.find(r);
    return it == index_.end() ? -1 : it->second;
}

Algebra::Block& Algebra::block(int a, int b) const {
    Block* blk;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto& slot = blocks_[{a, b}];
        if (!slot) slot = std::make_unique<Block>();
        blk = slot.get();
    }
    std::call_once(blk->once, [&] {
        const auto& ba = basis(a);
        const auto& bb = basis(b);
        blk->cells.resize(ba.size() * bb.size());
        if (dim(a + b) == 0) return;
        for (std::size_t i = 0; i < ba.size(); ++i)
            for (std::size_t j = 0; j < bb.size(); ++j) {
                MilnorElement p = milnor_product(ba[i], bb[j]);
                auto& cell = blk->cells[i * bb.size() + j];
                for (const auto& t : p.terms) {
                    int k = index_of(t);
                    if (k < 0) throw std::logic_error("product left the sub-Hopf algebra: " + format_sq(t));
                    cell.push_back(k);
                }
                std::sort(cell.begin(), cell.end());
            }
    });
    return *blk;
}

const std::vector<int>& Algebra::product(int a, int i, int b, int j) const {
    static const std::vector<int> empty;
    if (dim(a + b) == 0) return empty;
    const Block& blk = block(a, b);
    return blk.cells[static_cast<std::size_t>(i) * dim(b) + j];
}

BitVec Algebra::multiply(int a, const BitVec& x, int b, const BitVec& y) const {
    BitVec out(dim(a + b));
    if (out.size() == 0) return out;
    const Block& blk = block(a, b);
    std::size_t db = dim(b);
    for (std::size_t i : x.ones())
        for (std::size_t j : y.ones())
            for (int k : blk.cells[i * db + j]) out.flip(k);
    return out;
}

BitVec Algebra::to_vector(const MilnorElement& x) const {
    int d = x.degree();
    if (d < 0) return BitVec();
    BitVec v(dim(d));
    for (const auto& t : x.terms) {
        int k = index_of(t);
        if (k < 0) throw std::invalid_argument("element not in algebra: " + format_sq(t));
        v.flip(k);
    }
    return v;
}

MilnorElement Algebra::to_element(int degree, const BitVec& v) const {
    std::vector<Exponents> t;
    const auto& b = basis(degree);
    for (std::size_t k : v.ones()) t.push_back(b[k]);
    return MilnorElement(std::move(t));
}

const BitVec& Algebra::conjugate(int a, int i) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = conj_.find({a, i});
        if (it != conj_.end()) return it->second;
    }
    const Exponents& r = basis(a)[i];
    BitVec out(dim(a));
    if (a == 0) {
        out.set(0);
    } else {
        // chi(Sq(R)) = sum over R' != 0 of Sq(R') chi(Sq(R - R'))
        for (const auto& [left, right] : coproduct(r)) {
            if (left.empty()) continue;
            int dl = milnor_degree(left), dr = milnor_degree(right);
            BitVec l = BitVec::unit(dim(dl), index_of(left));
            out ^= multiply(dl, l, dr, conjugate(dr, index_of(right)));
        }
    }
    std::lock_guard<std::mutex> lock(mu_);
    return conj_.emplace(std::make_pair(a, i), std::move(out)).first->second;
}

std::vector<Exponents> Algebra::generators() const {
    std::vector<Exponents> g;
    for (int k = 0; (1 << k) <= prepared_; ++k) {
        Exponents r{1 << k};
        if (profile_.admits(r)) g.push_back(r);
    }
    return g;
}

}  // namespace extforge
