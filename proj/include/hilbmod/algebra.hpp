#pragma once

// Finite-dimensional C*-algebras A = M_{n_1}(C) + ... + M_{n_b}(C) and their elements.

#include <cstddef>
#include <span>
#include <vector>

#include "hilbmod/linalg.hpp"

namespace hilbmod {

/// Block dimensions [n_1, ..., n_b] of a finite-dimensional C*-algebra.
class BlockProfile {
public:
    /// Throws InvalidParameter unless the list is nonempty and every size is >= 1.
    explicit BlockProfile(std::vector<int> sizes);

    [[nodiscard]] std::size_t block_count() const { return sizes_.size(); }
    [[nodiscard]] int size(std::size_t i) const { return sizes_[i]; }
    [[nodiscard]] const std::vector<int>& sizes() const { return sizes_; }
    [[nodiscard]] int max_size() const;
    /// Complex dimension of A, sum of n_i^2.
    [[nodiscard]] int dimension() const;

    friend bool operator==(const BlockProfile&, const BlockProfile&) = default;

private:
    std::vector<int> sizes_;
};

/// An element of A, stored as one n_i x n_i complex matrix per block.
class AlgebraElement {
public:
    /// Throws ShapeError if the blocks do not match the profile.
    AlgebraElement(BlockProfile profile, std::vector<CMatrix> blocks);

    static AlgebraElement zero(const BlockProfile& profile);
    static AlgebraElement identity(const BlockProfile& profile);
    /// The central element s * 1.
    static AlgebraElement scalar(const BlockProfile& profile, cplx s);

    [[nodiscard]] const BlockProfile& profile() const { return profile_; }
    [[nodiscard]] const CMatrix& block(std::size_t i) const { return blocks_[i]; }
    [[nodiscard]] std::span<const CMatrix> blocks() const { return blocks_; }

    /// Blockwise conjugate transpose.
    [[nodiscard]] AlgebraElement adjoint() const;

    AlgebraElement& operator+=(const AlgebraElement& other);
    AlgebraElement& operator-=(const AlgebraElement& other);
    AlgebraElement& operator*=(cplx s);

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }

    /// Exact (bitwise) equality of profile and entries.
    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

private:
    BlockProfile profile_;
    std::vector<CMatrix> blocks_;
};

/// Blockwise product. Throws ShapeError on profile mismatch.
AlgebraElement a_mul(const AlgebraElement& a, const AlgebraElement& b);

/// C*-norm: largest singular value over all blocks.
double a_norm(const AlgebraElement& a);

/// True iff every block is Hermitian and has spectrum >= -tol, both tests relative to
/// max(1, ||block||).
bool a_is_positive(const AlgebraElement& a, double tol);

}  // namespace hilbmod
