#pragma once

// Finite-prefix checks of the compactness property of modules over finite-dimensional
// C*-algebras: bounded sequences have subsequences along which every inner product
// <v, zeta_n> converges, and compact operators turn such subsequences into norm-convergent
// ones.
//
// "Convergence" of a prefix is operationalized as an eps-cluster: a set of indices whose
// elements are pairwise within eps. Probes can only ever be a finite set, so the inner
// product statement is checked against finitely many v.

#include <cstddef>
#include <vector>

#include "hilbmod/operators.hpp"

namespace hilbmod {

/// A finite prefix of a bounded sequence in E.
class SequencePrefix {
public:
    /// Throws ShapeError on mixed shapes, InvalidParameter if some norm exceeds bound + 1e-12.
    SequencePrefix(ModuleShape shape, std::vector<ModuleElement> elements, double bound);

    [[nodiscard]] const ModuleShape& shape() const { return shape_; }
    [[nodiscard]] const std::vector<ModuleElement>& elements() const { return elements_; }
    [[nodiscard]] std::size_t size() const { return elements_.size(); }
    [[nodiscard]] double bound() const { return bound_; }
    [[nodiscard]] const ModuleElement& operator[](std::size_t i) const { return elements_[i]; }

private:
    ModuleShape shape_;
    std::vector<ModuleElement> elements_;
    double bound_;
};

struct Subsequence {
    /// Strictly increasing indices into the prefix.
    std::vector<std::size_t> indices;
    /// Centroid of the selected elements.
    ModuleElement limit;
    /// Largest pairwise element_norm distance among the selected elements.
    double diameter = 0.0;
    /// True when the prefix length met the pigeonhole bound for the grid.
    bool guarantee_held = false;
    /// True when at least `want` indices were found.
    bool enough = false;
    /// False if the grid cell came up short and the ball search was used.
    bool from_grid = true;
};

/// Grid bucketing over the 2d real coordinates (d = flattened complex dimension) with cubes of
/// side eps / (2 sqrt(d)), lower cell on ties; the most populated cell wins, lowest cell key on
/// equal counts. A cell has Euclidean diameter eps / sqrt(2) and the C*-norm is dominated by the
/// Euclidean one, so a cell is an eps-cluster. If that cell holds fewer than `want` elements,
/// the best closed ball of radius eps/2 around a prefix element is taken instead.
///
/// The pigeonhole guarantee holds when N >= (want - 1) * cells + 1, cells = ceil(4 M sqrt(d) / eps)^(2d).
/// Throws InvalidParameter for eps <= 0, want < 2 or want > N.
Subsequence extract_convergent_subsequence(const SequencePrefix& seq, double eps, std::size_t want);

/// max_j ||C zeta_{i_j} - C limit||. Throws InvalidParameter on an index out of range.
double verify_compactness_transfer(const SequencePrefix& seq, const std::vector<std::size_t>& indices,
                                   const ModuleElement& limit, const ModuleOperator& c);

struct NearestPoint {
    ModuleElement u;
    double delta = 0.0;
};

/// Orthogonal projection of x onto Ker(L) and its distance, inf { ||x - u|| : u in Ker(L) }.
NearestPoint nearest_kernel_point(const ModuleOperator& l, const ModuleElement& x, double rank_tol = 0.0);

}  // namespace hilbmod
