#include "extforge/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace extforge {

BitVec& BitVec::operator^=(const BitVec& o) {
    if (o.n_ != n_) throw std::invalid_argument("BitVec xor: size mismatch");
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
}

bool BitVec::any() const {
    for (Word w : w_)
        if (w) return true;
    return false;
}

std::size_t BitVec::count() const {
    std::size_t c = 0;
    for (Word w : w_) c += std::popcount(w);
    return c;
}

std::size_t BitVec::next_set(std::size_t from) const {
    if (from >= n_) return n_;
    std::size_t wi = from / kWordBits;
    Word w = w_[wi] & (~Word{0} << (from % kWordBits));
    while (true) {
        if (w) return wi * kWordBits + std::countr_zero(w);
        if (++wi >= w_.size()) return n_;
        w = w_[wi];
    }
}

std::vector<std::size_t> BitVec::ones() const {
    std::vector<std::size_t> out;
    for (std::size_t i = next_set(0); i < n_; i = next_set(i + 1)) out.push_back(i);
    return out;
}

bool BitVec::operator<(const BitVec& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return w_ < o.w_;
}

std::string BitVec::to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitVec BitVec::concat(const BitVec& o) const {
    BitVec r(n_ + o.n_);
    for (std::size_t i : ones()) r.set(i);
    for (std::size_t i : o.ones()) r.set(n_ + i);
    return r;
}

BitVec BitVec::slice(std::size_t begin, std::size_t len) const {
    BitVec r(len);
    for (std::size_t i = next_set(begin); i < begin + len && i < n_; i = next_set(i + 1)) r.set(i - begin);
    return r;
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<BitVec>& rows, std::size_t cols) {
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
}

BitMatrix BitMatrix::from_columns(const std::vector<BitVec>& cols, std::size_t rows) {
    BitMatrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].size() != rows) throw std::invalid_argument("from_columns: column length mismatch");
        for (std::size_t r : cols[c].ones()) m.set(r, c);
    }
    return m;
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("from_strings: ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            if (rows[r][c] == '1') m.set(r, c);
    }
    return m;
}

BitVec BitMatrix::row(std::size_t r) const {
    BitVec v(cols_);
    std::copy(row_data(r), row_data(r) + stride_, v.words().begin());
    return v;
}

BitVec BitMatrix::column(std::size_t c) const {
    BitVec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        if (get(r, c)) v.set(r);
    return v;
}

void BitMatrix::set_row(std::size_t r, const BitVec& v) {
    if (v.size() != cols_) throw std::invalid_argument("set_row: length mismatch");
    std::copy(v.words().begin(), v.words().end(), row_data(r));
}

void BitMatrix::xor_row(std::size_t dst, std::size_t src) {
    Word* d = row_data(dst);
    const Word* s = row_data(src);
    for (std::size_t i = 0; i < stride_; ++i) d[i] ^= s[i];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row_data(a), row_data(a) + stride_, row_data(b));
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const Word* d = row_data(r);
        for (std::size_t wi = 0; wi < stride_; ++wi) {
            Word w = d[wi];
            while (w) {
                std::size_t c = wi * kWordBits + std::countr_zero(w);
                t.set(c, r);
                w &= w - 1;
            }
        }
    }
    return t;
}

bool BitMatrix::is_zero() const {
    return std::all_of(bits_.begin(), bits_.end(), [](Word w) { return w == 0; });
}

std::size_t BitMatrix::count() const {
    std::size_t c = 0;
    for (Word w : bits_) c += std::popcount(w);
    return c;
}

RowEchelonResult rref(const BitMatrix& m) {
    RowEchelonResult res{m, {}, 0};
    BitMatrix& a = res.matrix;
    std::size_t next = 0;
    for (std::size_t c = 0; c < a.cols() && next < a.rows(); ++c) {
        std::size_t wi = c / kWordBits;
        Word bit = Word{1} << (c % kWordBits);
        std::size_t p = next;
        while (p < a.rows() && !(a.row_data(p)[wi] & bit)) ++p;
        if (p == a.rows()) continue;
        a.swap_rows(p, next);
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (r != next && (a.row_data(r)[wi] & bit)) a.xor_row(r, next);
        res.pivot_columns.push_back(c);
        ++next;
    }
    res.rank = next;
    return res;
}

std::size_t rank(const BitMatrix& m) {
    // forward elimination only
    BitMatrix a = m;
    std::size_t next = 0;
    for (std::size_t c = 0; c < a.cols() && next < a.rows(); ++c) {
        std::size_t wi = c / kWordBits;
        Word bit = Word{1} << (c % kWordBits);
        std::size_t p = next;
        while (p < a.rows() && !(a.row_data(p)[wi] & bit)) ++p;
        if (p == a.rows()) continue;
        a.swap_rows(p, next);
        for (std::size_t r = next + 1; r < a.rows(); ++r)
            if (a.row_data(r)[wi] & bit) a.xor_row(r, next);
        ++next;
    }
    return next;
}

std::vector<BitVec> kernel_basis(const BitMatrix& m) {
    RowEchelonResult e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : e.pivot_columns) is_pivot[c] = true;
    std::vector<BitVec> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        BitVec v(m.cols());
        v.set(f);
        for (std::size_t i = 0; i < e.rank; ++i)
            if (e.matrix.get(i, f)) v.set(e.pivot_columns[i]);
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<BitVec> solve(const BitMatrix& m, const BitVec& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: rhs length mismatch");
    BitMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t wi = 0; wi < m.stride(); ++wi) aug.row_data(r)[wi] = m.row_data(r)[wi];
        if (b.get(r)) aug.set(r, m.cols());
    }
    RowEchelonResult e = rref(aug);
    if (!e.pivot_columns.empty() && e.pivot_columns.back() == m.cols()) return std::nullopt;
    BitVec x(m.cols());
    for (std::size_t i = 0; i < e.rank; ++i)
        if (e.matrix.get(i, m.cols())) x.set(e.pivot_columns[i]);
    return x;
}

BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
    BitMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Word* ci = c.row_data(i);
        const Word* ai = a.row_data(i);
        for (std::size_t wi = 0; wi < a.stride(); ++wi) {
            Word w = ai[wi];
            while (w) {
                std::size_t k = wi * kWordBits + std::countr_zero(w);
                const Word* bk = b.row_data(k);
                for (std::size_t j = 0; j < c.stride(); ++j) ci[j] ^= bk[j];
                w &= w - 1;
            }
        }
    }
    return c;
}

BitVec apply(const BitMatrix& m, const BitVec& x) {
    if (x.size() != m.cols()) throw std::invalid_argument("apply: vector length mismatch");
    BitVec y(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const Word* d = m.row_data(r);
        Word acc = 0;
        for (std::size_t wi = 0; wi < m.stride(); ++wi) acc ^= d[wi] & x.words()[wi];
        if (std::popcount(acc) & 1) y.set(r);
    }
    return y;
}

bool Echelon::add(const BitVec& v) {
    if (v.size() != dim_) throw std::invalid_argument("Echelon::add: dimension mismatch");
    BitVec r = v;
    BitVec combo = reduce(r);
    std::size_t idx = inserted_++;
    if (r.none()) return false;
    if (cap_) {
        if (idx >= cap_) throw std::out_of_range("Echelon: tracking capacity exceeded");
        combo.flip(idx);
        combo_.push_back(std::move(combo));
    }
    pivot_row_[r.next_set(0)] = static_cast<long>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
}

BitVec Echelon::reduce(BitVec& v) const {
    BitVec combo(cap_);
    for (std::size_t p = v.next_set(0); p < dim_; p = v.next_set(p + 1)) {
        long r = pivot_row_[p];
        if (r < 0) continue;
        v ^= rows_[r];
        if (cap_) combo ^= combo_[r];
    }
    return combo;
}

bool Echelon::contains(const BitVec& v) const {
    BitVec r = v;
    reduce(r);
    return r.none();
}

std::optional<BitVec> Echelon::express(const BitVec& v) const {
    if (!cap_) throw std::logic_error("Echelon::express needs tracking");
    BitVec r = v;
    BitVec combo = reduce(r);
    if (r.any()) return std::nullopt;
    return combo;
}

}  // namespace extforge
