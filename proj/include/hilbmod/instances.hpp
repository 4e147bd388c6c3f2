#pragma once

// Deterministic instance generation and an exact rank oracle.
//
// Random streams come from std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniform and normal variates are derived here rather than through
// <random> distributions, whose algorithms are implementation-defined, so instances are
// reproducible across standard libraries.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hilbmod/operators.hpp"

namespace hilbmod {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi);
    /// Standard normal by Box-Muller.
    double normal();
    /// Complex normal with E|z|^2 = 1.
    cplx complex_normal();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// SplitMix64 finalizer of base + stream; independent child seeds for instance batches.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);
/// Haar-distributed unitary.
CMatrix random_unitary(Eigen::Index n, Rng& rng);
AlgebraElement random_algebra_element(const BlockProfile& profile, Rng& rng);
ModuleElement random_element(const ModuleShape& shape, Rng& rng);
ModuleOperator random_operator(const ModuleShape& shape, Rng& rng);

enum class Similarity {
    /// S = U diag(s) V^H with Haar U, V and s in [1, 4]: cond(S) <= 4.
    generic,
    /// S = U (S_nil + S_inv) for a Haar U, block diagonal w.r.t. the nilpotent/invertible split.
    /// Ker(L^r) and Ran(L^r) then come out orthogonal.
    orthogonal_split,
    identity,
};

struct GenSpec {
    std::uint64_t seed = 0;
    BlockProfile profile{std::vector<int>{1}};
    int k = 1;
    std::optional<int> target_r;
    double norm_cap = 16.0;
    Similarity similarity = Similarity::generic;
};

/// Random compact operator C on A^k.
///
/// Without target_r: a Gaussian operator rescaled to norm in [0.1, 1) * norm_cap.
/// With target_r: C = I - S J S^{-1} per block, J = (nilpotent Jordan blocks of sizes
/// <= target_r, one of size exactly target_r in some block) + (upper-triangular invertible part,
/// eigenvalue moduli in [0.5, 1.5]). Then the ascent of I - C is exactly target_r.
/// Draws are rejected when cond(S) > 1e3 or ||C|| > norm_cap.
/// Throws InvalidParameter if target_r is negative or exceeds k * max n_i.
ModuleOperator gen_compact(const GenSpec& spec);

/// Exact complex rational, for certification of small rank computations.
struct GaussianRational {
    boost::multiprecision::cpp_rational re;
    boost::multiprecision::cpp_rational im;

    friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
};

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator-(const GaussianRational& a, const GaussianRational& b);
GaussianRational operator*(const GaussianRational& a, const GaussianRational& b);

using ExactMatrix = std::vector<std::vector<GaussianRational>>;

/// Exact conversion of a double matrix (every finite double is a dyadic rational).
/// Throws InvalidParameter on NaN or infinity.
ExactMatrix to_exact(const CMatrix& m);
ExactMatrix exact_multiply(const ExactMatrix& a, const ExactMatrix& b);

/// Rank by fraction-free (Bareiss) elimination over the Gaussian integers after clearing
/// denominators row by row.
int exact_rank_oracle(const ExactMatrix& m);
int exact_rank_oracle(const CMatrix& m);

}  // namespace hilbmod
