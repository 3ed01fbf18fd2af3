#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chunknet/rng.hpp"

namespace chunknet {

/// Word-packed GF(2) vector. Bit i lives in word i/64 at position i%64.
/// Bits beyond size() are kept zero after every operation, so equality of
/// vectors is equality of their word arrays.
class BinaryVector {
public:
    BinaryVector() = default;
    explicit BinaryVector(std::size_t bits)
        : bits_(bits), words_((bits + 63) / 64, 0) {}

    /// Each bit i.i.d. Bernoulli(1/2). Consumes exactly ceil(bits/64) draws
    /// from rng; surplus bits of the last draw are discarded.
    static BinaryVector random(std::size_t bits, Rng& rng);

    std::size_t size() const { return bits_; }
    bool empty() const { return bits_ == 0; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool v) {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BinaryVector& operator^=(const BinaryVector& other);
    friend BinaryVector operator^(BinaryVector a, const BinaryVector& b) {
        a ^= b;
        return a;
    }

    bool operator==(const BinaryVector&) const = default;

    bool is_zero() const;
    std::size_t popcount() const;

    /// Index of the highest set bit, or -1 when zero.
    int highest_bit() const { return highest_bit_below(static_cast<int>(bits_)); }
    /// Highest set bit strictly below `limit`, or -1.
    int highest_bit_below(int limit) const;

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    std::string to_string() const; // msb-last, e.g. bit 0 printed first

private:
    void mask_tail() {
        if (bits_ & 63) words_.back() &= (~std::uint64_t{0}) >> (64 - (bits_ & 63));
    }

    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Column-oriented GF(2) matrix: `rows` is the symbol dimension, columns are
/// payload vectors of that length. Packets arrive as columns, hence the layout.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    explicit BinaryMatrix(std::size_t rows) : rows_(rows) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_.size(); }

    void append_column(BinaryVector col);
    const BinaryVector& column(std::size_t j) const { return cols_[j]; }
    const std::vector<BinaryVector>& columns() const { return cols_; }

private:
    std::size_t rows_ = 0;
    std::vector<BinaryVector> cols_;
};

/// XOR of exactly the vectors whose mask bit is 1; the all-zero mask yields
/// the all-zero vector. All vectors must share a length and the mask length
/// must equal the vector count.
BinaryVector xor_combine(std::span<const BinaryVector> vectors, const BinaryVector& mask);

/// Same stream contract as BinaryVector::random, kept as a free function to
/// mirror how call sites read.
inline BinaryVector random_bernoulli(std::size_t bits, Rng& rng) {
    return BinaryVector::random(bits, rng);
}

/// Incremental row-echelon basis over GF(2); pivot of a stored vector is its
/// highest set bit. insert() reduces the vector against the basis and keeps
/// it if anything survives.
class Gf2Basis {
public:
    explicit Gf2Basis(std::size_t dim)
        : slot_of_pivot_(dim, -1) {}

    /// Returns true when the vector was innovative (rank grew by one).
    bool insert(BinaryVector v);

    std::size_t rank() const { return rows_.size(); }
    std::size_t dim() const { return slot_of_pivot_.size(); }
    bool full() const { return rows_.size() == slot_of_pivot_.size(); }

    /// Reduce a copy of v against the basis (used by tests and the solver).
    BinaryVector reduce(BinaryVector v) const;

private:
    std::vector<int> slot_of_pivot_;
    std::vector<BinaryVector> rows_;
};

/// GF(2) rank by incremental elimination. The matrix is not modified.
std::size_t rank(const BinaryMatrix& m);

struct Underdetermined {
    std::size_t rank = 0;
};

using SolveResult = std::variant<std::vector<BinaryVector>, Underdetermined>;

/// Solve for the k symbols x such that for every column c_j of m,
/// XOR_{i in support(c_j)} x_i == y_j. Unique iff rank(m) == rows(m);
/// otherwise Underdetermined carries the achieved rank. Symbols must all
/// share a bit width and there must be one per column.
SolveResult solve(const BinaryMatrix& m, std::span<const BinaryVector> y);

} // namespace chunknet
