#include "chunknet/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace chunknet {

BinaryVector BinaryVector::random(std::size_t bits, Rng& rng) {
    BinaryVector v(bits);
    for (auto& w : v.words_) w = rng();
    v.mask_tail();
    return v;
}

BinaryVector& BinaryVector::operator^=(const BinaryVector& other) {
    if (bits_ != other.bits_)
        throw std::invalid_argument("BinaryVector xor: length mismatch (" +
                                    std::to_string(bits_) + " vs " +
                                    std::to_string(other.bits_) + ")");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

bool BinaryVector::is_zero() const {
    for (auto w : words_)
        if (w) return false;
    return true;
}

std::size_t BinaryVector::popcount() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

int BinaryVector::highest_bit_below(int limit) const {
    if (limit <= 0) return -1;
    int wi = (limit - 1) >> 6;
    std::uint64_t w = words_[wi];
    const int rem = limit & 63;
    if (rem) w &= (~std::uint64_t{0}) >> (64 - rem);
    for (;;) {
        if (w) return (wi << 6) + 63 - std::countl_zero(w);
        if (--wi < 0) return -1;
        w = words_[wi];
    }
}

std::string BinaryVector::to_string() const {
    std::string s;
    s.reserve(bits_);
    for (std::size_t i = 0; i < bits_; ++i) s.push_back(get(i) ? '1' : '0');
    return s;
}

void BinaryMatrix::append_column(BinaryVector col) {
    if (col.size() != rows_)
        throw std::invalid_argument("BinaryMatrix: column length " +
                                    std::to_string(col.size()) + " != rows " +
                                    std::to_string(rows_));
    cols_.push_back(std::move(col));
}

BinaryVector xor_combine(std::span<const BinaryVector> vectors, const BinaryVector& mask) {
    if (mask.size() != vectors.size())
        throw std::invalid_argument("xor_combine: mask length " +
                                    std::to_string(mask.size()) + " != vector count " +
                                    std::to_string(vectors.size()));
    const std::size_t len = vectors.empty() ? 0 : vectors.front().size();
    for (const auto& v : vectors)
        if (v.size() != len)
            throw std::invalid_argument("xor_combine: vectors differ in length");
    BinaryVector out(len);
    for (std::size_t i = 0; i < vectors.size(); ++i)
        if (mask.get(i)) out ^= vectors[i];
    return out;
}

bool Gf2Basis::insert(BinaryVector v) {
    int h = v.highest_bit();
    while (h >= 0) {
        const int slot = slot_of_pivot_[static_cast<std::size_t>(h)];
        if (slot < 0) {
            slot_of_pivot_[static_cast<std::size_t>(h)] = static_cast<int>(rows_.size());
            rows_.push_back(std::move(v));
            return true;
        }
        v ^= rows_[static_cast<std::size_t>(slot)];
        h = v.highest_bit_below(h);
    }
    return false;
}

BinaryVector Gf2Basis::reduce(BinaryVector v) const {
    int h = v.highest_bit();
    while (h >= 0) {
        const int slot = slot_of_pivot_[static_cast<std::size_t>(h)];
        if (slot >= 0) v ^= rows_[static_cast<std::size_t>(slot)];
        h = v.highest_bit_below(h);
    }
    return v;
}

std::size_t rank(const BinaryMatrix& m) {
    Gf2Basis basis(m.rows());
    for (const auto& col : m.columns()) {
        basis.insert(col);
        if (basis.full()) break; // rank cannot grow past the row dimension
    }
    return basis.rank();
}

SolveResult solve(const BinaryMatrix& m, std::span<const BinaryVector> y) {
    const std::size_t k = m.rows();
    if (y.size() != m.cols())
        throw std::invalid_argument("solve: " + std::to_string(y.size()) +
                                    " symbols for " + std::to_string(m.cols()) + " columns");
    const std::size_t width = y.empty() ? 0 : y.front().size();
    for (const auto& s : y)
        if (s.size() != width) throw std::invalid_argument("solve: symbols differ in width");

    // Forward elimination on augmented rows (payload vector | symbol).
    std::vector<int> slot_of_pivot(k, -1);
    std::vector<BinaryVector> rows;
    std::vector<BinaryVector> rhs;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        BinaryVector row = m.column(j);
        BinaryVector r = y[j];
        int h = row.highest_bit();
        while (h >= 0) {
            const int slot = slot_of_pivot[static_cast<std::size_t>(h)];
            if (slot < 0) break;
            row ^= rows[static_cast<std::size_t>(slot)];
            r ^= rhs[static_cast<std::size_t>(slot)];
            h = row.highest_bit_below(h);
        }
        if (h >= 0) {
            slot_of_pivot[static_cast<std::size_t>(h)] = static_cast<int>(rows.size());
            rows.push_back(std::move(row));
            rhs.push_back(std::move(r));
            if (rows.size() == k) break;
        }
    }
    if (rows.size() < k) return Underdetermined{rows.size()};

    // Back substitution: clear every pivot from the rows above it, walking
    // pivots from low to high so each row ends up a unit vector.
    for (std::size_t p = 0; p < k; ++p) {
        const int sp = slot_of_pivot[p];
        for (std::size_t qbit = p + 1; qbit < k; ++qbit) {
            const int sq = slot_of_pivot[qbit];
            if (rows[static_cast<std::size_t>(sq)].get(p)) {
                rows[static_cast<std::size_t>(sq)] ^= rows[static_cast<std::size_t>(sp)];
                rhs[static_cast<std::size_t>(sq)] ^= rhs[static_cast<std::size_t>(sp)];
            }
        }
    }
    std::vector<BinaryVector> x(k);
    for (std::size_t p = 0; p < k; ++p)
        x[p] = rhs[static_cast<std::size_t>(slot_of_pivot[p])];
    return x;
}

} // namespace chunknet
