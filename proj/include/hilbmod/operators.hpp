#pragma once

// Adjointable operators on E = A^k. Every such operator is left multiplication by a
// (k n_i) x (k n_i) matrix in block i. E is finitely generated, so all of them are compact.
//
// Rank tolerance convention, shared by every rank decision in the library: a caller-supplied
// rank_tol > 0 is an absolute singular-value cutoff; rank_tol == 0 selects
//   cutoff = ||T|| * (k * max n_i) * 1e-12.

#include <cstddef>
#include <span>
#include <vector>

#include "hilbmod/module.hpp"

namespace hilbmod {

class ModuleOperator {
public:
    /// Throws ShapeError if a block is not (k n_i) x (k n_i).
    ModuleOperator(ModuleShape shape, std::vector<CMatrix> blocks);

    static ModuleOperator zero(const ModuleShape& shape);
    static ModuleOperator identity(const ModuleShape& shape);

    [[nodiscard]] const ModuleShape& shape() const { return shape_; }
    [[nodiscard]] const CMatrix& block(std::size_t i) const { return blocks_[i]; }
    [[nodiscard]] std::span<const CMatrix> blocks() const { return blocks_; }

    ModuleOperator& operator+=(const ModuleOperator& other);
    ModuleOperator& operator-=(const ModuleOperator& other);
    ModuleOperator& operator*=(cplx s);

    friend ModuleOperator operator+(ModuleOperator a, const ModuleOperator& b) { return a += b; }
    friend ModuleOperator operator-(ModuleOperator a, const ModuleOperator& b) { return a -= b; }
    friend ModuleOperator operator*(cplx s, ModuleOperator a) { return a *= s; }

    friend bool operator==(const ModuleOperator& a, const ModuleOperator& b);

private:
    ModuleShape shape_;
    std::vector<CMatrix> blocks_;
};

/// Composition S o T (apply T first).
ModuleOperator compose(const ModuleOperator& s, const ModuleOperator& t);

/// T^n by repeated multiplication; T^0 = I.
ModuleOperator power(const ModuleOperator& t, int n);

ModuleElement apply(const ModuleOperator& t, const ModuleElement& x);

ModuleOperator adjoint(const ModuleOperator& t);

/// theta_{x,y}(z) = x <y, z>.
ModuleOperator theta(const ModuleElement& x, const ModuleElement& y);

/// Largest block singular value.
double operator_norm(const ModuleOperator& t);

/// Absolute cutoff implied by rank_tol for T (see file comment).
double rank_cutoff(const ModuleOperator& t, double rank_tol);

/// Union of the block eigenvalues, merged when closer than tol, sorted by (re, im).
std::vector<cplx> spectrum(const ModuleOperator& c, double tol);

/// Moore-Penrose inverse by blockwise SVD.
ModuleOperator moore_penrose(const ModuleOperator& t, double rank_tol = 0.0);

struct EpReport {
    bool ep = false;
    /// ||T T^+ - T^+ T||
    double commutator_residual = 0.0;
    /// ||Pi_{Ran T} - Pi_{Ran T*}|| from independently computed range bases.
    double range_projector_gap = 0.0;
};

/// EP test by the commutation criterion ||T T^+ - T^+ T|| <= tol.
EpReport is_ep(const ModuleOperator& t, double tol, double rank_tol = 0.0);

/// Finitely generated kernel: per-block complex null-space dimensions d_i and
/// m = max_i ceil(d_i / n_i) A-module generators packed from orthonormal null bases.
struct KernelData {
    std::vector<int> dims;
    std::vector<ModuleElement> generators;
    /// The kernel as a submodule; its basis is the orthonormal null basis per block.
    Submodule span;

    [[nodiscard]] int count() const { return static_cast<int>(generators.size()); }
};

KernelData kernel_generators(const ModuleOperator& t, double rank_tol = 0.0);

/// Ran(T) as a submodule with orthonormal column-space bases.
Submodule range_submodule(const ModuleOperator& t, double rank_tol = 0.0);

/// Orthogonal projector onto a submodule, as an operator.
ModuleOperator projector_onto(const Submodule& sub);

}  // namespace hilbmod
