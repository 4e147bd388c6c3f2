#pragma once

// The standard Hilbert A-module E = A^k and its finitely generated submodules.
//
// An element x = (x_1, ..., x_k) is stored per block i as the (k*n_i) x n_i matrix
// obtained by stacking the i-th blocks of x_1, ..., x_k. With this layout
//   <x, y>      = X_i^H Y_i          (per block)
//   x . a       = X_i A_i            (right action)
//   ||x||       = max_i sigma_max(X_i)
// An A-submodule of E is exactly a choice of complex subspace S_i of C^{k n_i} per block,
// the submodule being all elements whose block-i columns lie in S_i. Submodule stores
// orthonormal bases of the S_i.

#include <cstddef>
#include <span>
#include <vector>

#include "hilbmod/algebra.hpp"

namespace hilbmod {

class ModuleShape {
public:
    /// Throws InvalidParameter when k < 1.
    ModuleShape(BlockProfile profile, int k);

    [[nodiscard]] const BlockProfile& profile() const { return profile_; }
    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] std::size_t block_count() const { return profile_.block_count(); }
    /// Row count k * n_i of block i.
    [[nodiscard]] Eigen::Index rows(std::size_t i) const { return static_cast<Eigen::Index>(k_) * profile_.size(i); }
    [[nodiscard]] Eigen::Index cols(std::size_t i) const { return profile_.size(i); }
    [[nodiscard]] Eigen::Index max_rows() const;
    /// Complex dimension of E as a vector space, k * sum n_i^2.
    [[nodiscard]] int flat_dimension() const { return k_ * profile_.dimension(); }

    friend bool operator==(const ModuleShape&, const ModuleShape&) = default;

private:
    BlockProfile profile_;
    int k_;
};

class ModuleElement {
public:
    /// Throws ShapeError if a block is not (k n_i) x n_i.
    ModuleElement(ModuleShape shape, std::vector<CMatrix> blocks);

    static ModuleElement zero(const ModuleShape& shape);
    /// Standard generator e_j: the unit of A in slot j, zero elsewhere (0-based j).
    static ModuleElement standard(const ModuleShape& shape, int j);

    [[nodiscard]] const ModuleShape& shape() const { return shape_; }
    [[nodiscard]] const CMatrix& block(std::size_t i) const { return blocks_[i]; }
    [[nodiscard]] std::span<const CMatrix> blocks() const { return blocks_; }

    ModuleElement& operator+=(const ModuleElement& other);
    ModuleElement& operator-=(const ModuleElement& other);
    ModuleElement& operator*=(cplx s);

    friend ModuleElement operator+(ModuleElement a, const ModuleElement& b) { return a += b; }
    friend ModuleElement operator-(ModuleElement a, const ModuleElement& b) { return a -= b; }
    friend ModuleElement operator*(cplx s, ModuleElement a) { return a *= s; }

    friend bool operator==(const ModuleElement& a, const ModuleElement& b);

private:
    ModuleShape shape_;
    std::vector<CMatrix> blocks_;
};

/// A-valued inner product <x, y>, conjugate-linear in x.
AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y);

/// x . a
ModuleElement right_action(const ModuleElement& x, const AlgebraElement& a);

/// ||x|| = ||<x, x>||^{1/2}, evaluated as the largest block singular value.
double element_norm(const ModuleElement& x);

/// Builds A-module generators from per-block orthonormal bases by packing n_i basis vectors
/// into the columns of each generator, zero-padding the remainder. The generator count is
/// max_i ceil(d_i / n_i).
std::vector<ModuleElement> pack_generators(const ModuleShape& shape, std::span<const CMatrix> bases);

/// A finitely generated closed submodule of E.
class Submodule {
public:
    /// From per-block orthonormal bases; generators are produced by pack_generators.
    static Submodule from_basis(const ModuleShape& shape, std::vector<CMatrix> bases);
    static Submodule zero(const ModuleShape& shape);
    static Submodule full(const ModuleShape& shape);

    [[nodiscard]] const ModuleShape& shape() const { return shape_; }
    [[nodiscard]] const std::vector<ModuleElement>& generators() const { return generators_; }
    [[nodiscard]] const CMatrix& basis(std::size_t i) const { return bases_[i]; }
    /// Complex dimension of the block-i subspace.
    [[nodiscard]] Eigen::Index dim(std::size_t i) const { return bases_[i].cols(); }
    [[nodiscard]] std::vector<int> dims() const;
    /// Orthogonal projector onto the block-i subspace.
    [[nodiscard]] CMatrix projector(std::size_t i) const;
    /// True iff every block column of x lies in the subspace within tol * max(1, ||x||).
    [[nodiscard]] bool contains(const ModuleElement& x, double tol) const;

private:
    Submodule(ModuleShape shape, std::vector<ModuleElement> generators, std::vector<CMatrix> bases);
    friend Submodule submodule_from_generators(std::span<const ModuleElement> gens);

    ModuleShape shape_;
    std::vector<ModuleElement> generators_;
    std::vector<CMatrix> bases_;
};

/// The A-submodule spanned by the generators. Throws InvalidParameter on an empty list
/// and ShapeError on mixed shapes.
Submodule submodule_from_generators(std::span<const ModuleElement> gens);

/// Orthogonal projection of x onto the submodule, applied columnwise per block.
ModuleElement project_onto(const Submodule& sub, const ModuleElement& x);

/// inf { ||x - u|| : u in sub }, attained at the orthogonal projection.
double distance_to_submodule(const ModuleElement& x, const Submodule& sub);

/// F^perp = { y : <g, y> = 0 for all g in F }.
Submodule orthogonal_complement(const Submodule& sub);

}  // namespace hilbmod
