#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace extforge {

using Word = std::uint64_t;
constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_(words_for(n), 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (w_[i / kWordBits] >> (i % kWordBits)) & 1u; }
    void set(std::size_t i, bool v = true) {
        Word m = Word{1} << (i % kWordBits);
        if (v) w_[i / kWordBits] |= m; else w_[i / kWordBits] &= ~m;
    }
    void flip(std::size_t i) { w_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

    BitVec& operator^=(const BitVec& o);
    bool any() const;
    bool none() const { return !any(); }
    std::size_t count() const;
    // index of lowest set bit at or after `from`, or size() if none
    std::size_t next_set(std::size_t from = 0) const;
    std::vector<std::size_t> ones() const;

    const std::vector<Word>& words() const { return w_; }
    std::vector<Word>& words() { return w_; }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const BitVec& o) const { return !(*this == o); }
    bool operator<(const BitVec& o) const;

    std::string to_string() const;

    static BitVec unit(std::size_t n, std::size_t i) { BitVec v(n); v.set(i); return v; }
    BitVec concat(const BitVec& o) const;
    BitVec slice(std::size_t begin, std::size_t len) const;

private:
    std::size_t n_ = 0;
    std::vector<Word> w_;
};

inline BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_(words_for(cols)), bits_(rows * stride_, 0) {}

    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(const std::vector<BitVec>& rows, std::size_t cols);
    static BitMatrix from_columns(const std::vector<BitVec>& cols, std::size_t rows);
    static BitMatrix from_strings(const std::vector<std::string>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stride() const { return stride_; }

    bool get(std::size_t r, std::size_t c) const {
        return (bits_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v = true) {
        Word m = Word{1} << (c % kWordBits);
        Word& w = bits_[r * stride_ + c / kWordBits];
        if (v) w |= m; else w &= ~m;
    }
    void flip(std::size_t r, std::size_t c) { bits_[r * stride_ + c / kWordBits] ^= Word{1} << (c % kWordBits); }

    Word* row_data(std::size_t r) { return bits_.data() + r * stride_; }
    const Word* row_data(std::size_t r) const { return bits_.data() + r * stride_; }
    BitVec row(std::size_t r) const;
    BitVec column(std::size_t c) const;
    void set_row(std::size_t r, const BitVec& v);
    void xor_row(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);

    BitMatrix transpose() const;
    bool is_zero() const;
    std::size_t count() const;
    const std::vector<Word>& payload() const { return bits_; }

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }
    bool operator!=(const BitMatrix& o) const { return !(*this == o); }

private:
    std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<Word> bits_;
};

struct RowEchelonResult {
    BitMatrix matrix;
    std::vector<std::size_t> pivot_columns;
    std::size_t rank = 0;
};

RowEchelonResult rref(const BitMatrix& m);
std::size_t rank(const BitMatrix& m);
std::vector<BitVec> kernel_basis(const BitMatrix& m);
std::optional<BitVec> solve(const BitMatrix& m, const BitVec& b);
BitMatrix multiply(const BitMatrix& a, const BitMatrix& b);
BitVec apply(const BitMatrix& m, const BitVec& x);

// Incrementally built span. A stored vector's pivot is its lowest set bit.
// Each stored vector remembers which inserted vectors it is a sum of, so
// reduce() also returns a preimage in terms of insertion order.
class Echelon {
public:
    // track_capacity > 0 enables preimage tracking for up to that many insertions
    explicit Echelon(std::size_t dim = 0, std::size_t track_capacity = 0)
        : dim_(dim), cap_(track_capacity), pivot_row_(dim, -1) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    std::size_t inserted() const { return inserted_; }

    // returns true if v was independent of the current span
    bool add(const BitVec& v);
    bool contains(const BitVec& v) const;
    // clears every pivot column of v (canonical residue); returns the
    // combination of inserted vectors that was subtracted when tracking
    BitVec reduce(BitVec& v) const;
    // solves v = sum of inserted vectors; nullopt if outside the span
    std::optional<BitVec> express(const BitVec& v) const;

private:
    std::size_t dim_;
    std::size_t cap_;
    std::size_t inserted_ = 0;
    std::vector<long> pivot_row_;
    std::vector<BitVec> rows_;
    std::vector<BitVec> combo_;
};

}  // namespace extforge
