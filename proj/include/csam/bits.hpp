#pragma once

// Packed bit vectors and bit matrices. Activation states and adjacency rows
// both reduce to arrays of 64-bit words, so every hot retrieval loop is a
// word-wise AND scan with popcount or early-exit.

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace csam {
namespace bits {

inline constexpr uint32_t word_bits = 64;

inline constexpr uint32_t word_count(uint32_t nbits) {
    return (nbits + word_bits - 1) / word_bits;
}

// popcount(a & b) over the common prefix of the two spans
inline uint32_t count_and(std::span<const uint64_t> a, std::span<const uint64_t> b) {
    uint32_t total = 0;
    size_t n = a.size() < b.size() ? a.size() : b.size();
    for (size_t w = 0; w < n; ++w)
        total += static_cast<uint32_t>(std::popcount(a[w] & b[w]));
    return total;
}

// true iff (a & b) has a set bit inside [begin, begin + len)
inline bool any_and_in_range(std::span<const uint64_t> a, std::span<const uint64_t> b,
                             uint32_t begin, uint32_t len) {
    if (len == 0) return false;
    uint32_t last = begin + len - 1;
    uint32_t fw = begin / word_bits;
    uint32_t lw = last / word_bits;
    uint64_t first_mask = ~uint64_t{0} << (begin % word_bits);
    uint64_t last_mask = ~uint64_t{0} >> (word_bits - 1 - last % word_bits);
    if (fw == lw)
        return (a[fw] & b[fw] & first_mask & last_mask) != 0;
    if (a[fw] & b[fw] & first_mask) return true;
    for (uint32_t w = fw + 1; w < lw; ++w)
        if (a[w] & b[w]) return true;
    return (a[lw] & b[lw] & last_mask) != 0;
}

} // namespace bits

class BitVec {
public:
    BitVec() = default;
    explicit BitVec(uint32_t nbits) : n_(nbits), w_(bits::word_count(nbits), 0) {}

    uint32_t size() const { return n_; }

    bool test(uint32_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }
    void set(uint32_t i) { w_[i / 64] |= uint64_t{1} << (i % 64); }
    void reset(uint32_t i) { w_[i / 64] &= ~(uint64_t{1} << (i % 64)); }

    void clear() { for (auto& w : w_) w = 0; }

    uint32_t count() const {
        uint32_t total = 0;
        for (uint64_t w : w_) total += static_cast<uint32_t>(std::popcount(w));
        return total;
    }

    bool none() const {
        for (uint64_t w : w_) if (w) return false;
        return true;
    }

    void set_range(uint32_t begin, uint32_t len) {
        for (uint32_t i = begin; i < begin + len; ++i) set(i);
    }
    void reset_range(uint32_t begin, uint32_t len) {
        for (uint32_t i = begin; i < begin + len; ++i) reset(i);
    }

    uint32_t count_in_range(uint32_t begin, uint32_t len) const {
        uint32_t total = 0;
        for (uint32_t i = begin; i < begin + len; ++i) total += test(i);
        return total;
    }

    // this ⊆ other
    bool is_subset_of(const BitVec& other) const {
        for (size_t w = 0; w < w_.size(); ++w)
            if (w_[w] & ~other.w_[w]) return false;
        return true;
    }

    // ascending order of set bit indices
    template <class F>
    void for_each_set(F&& f) const {
        for (size_t w = 0; w < w_.size(); ++w) {
            uint64_t bitsleft = w_[w];
            while (bitsleft) {
                uint32_t b = static_cast<uint32_t>(std::countr_zero(bitsleft));
                f(static_cast<uint32_t>(w * 64 + b));
                bitsleft &= bitsleft - 1;
            }
        }
    }

    std::span<const uint64_t> words() const { return w_; }
    std::span<uint64_t> words() { return w_; }

    friend bool operator==(const BitVec&, const BitVec&) = default;

private:
    uint32_t n_ = 0;
    std::vector<uint64_t> w_;
};

// Row-major packed bit matrix; rows are independently addressable word spans.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(uint32_t rows, uint32_t cols)
        : rows_(rows), cols_(cols), stride_(bits::word_count(cols)),
          w_(static_cast<size_t>(rows) * stride_, 0) {}

    uint32_t rows() const { return rows_; }
    uint32_t cols() const { return cols_; }

    bool test(uint32_t r, uint32_t c) const {
        return (w_[static_cast<size_t>(r) * stride_ + c / 64] >> (c % 64)) & 1;
    }
    void set(uint32_t r, uint32_t c) {
        w_[static_cast<size_t>(r) * stride_ + c / 64] |= uint64_t{1} << (c % 64);
    }
    void set_symmetric(uint32_t r, uint32_t c) { set(r, c); set(c, r); }

    std::span<const uint64_t> row(uint32_t r) const {
        return {w_.data() + static_cast<size_t>(r) * stride_, stride_};
    }
    std::span<uint64_t> row(uint32_t r) {
        return {w_.data() + static_cast<size_t>(r) * stride_, stride_};
    }

    void clear() { for (auto& w : w_) w = 0; }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    uint32_t rows_ = 0;
    uint32_t cols_ = 0;
    uint32_t stride_ = 0;
    std::vector<uint64_t> w_;
};

} // namespace csam
