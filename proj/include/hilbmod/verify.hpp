#pragma once

// Report builders for the analyze/solve commands and the randomized invariant suite behind
// `hilbmod verify`.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hilbmod/instances.hpp"
#include "hilbmod/io.hpp"
#include "hilbmod/property_h.hpp"

namespace hilbmod {

/// Runs the Riesz decomposition and matrix-form check for a problem file.
io::ReportFile run_analyze(const io::ProblemFile& problem, std::optional<double> rank_tol_override = std::nullopt);

/// Runs the solvability analysis for a problem file carrying f.
io::ReportFile run_solve(const io::ProblemFile& problem, std::optional<double> rank_tol_override = std::nullopt);

/// A randomly shaped instance with a prescribed ascent: 1-2 blocks of size 1-3, k in 1..4,
/// target_r in 0..min(3, k max n_i). Deterministic in (base_seed, index).
struct Instance {
    GenSpec spec;
    ModuleOperator c;
};
Instance chain_instance(std::uint64_t base_seed, std::size_t index, Similarity similarity = Similarity::generic);

/// A bounded sequence (norm <= 1) in a module of flattened dimension <= 8 that revisits 1-4
/// cluster points with perturbations decaying like 1/n.
SequencePrefix clustered_sequence(std::uint64_t seed, std::size_t length);

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    std::size_t count = 200;
    int jobs = 1;
    /// Rank tolerance for every rank decision (0 = automatic).
    double rank_tol = 0.0;
};

struct FamilyResult {
    std::string name;
    std::string description;
    bool passed = true;
    std::size_t instances = 0;
    std::size_t failures = 0;
    /// Largest residual normalized by its threshold (<= 1 means within tolerance).
    double worst_ratio = 0.0;
    /// First failing instance, if any.
    std::optional<std::size_t> failing_index;
    std::optional<std::uint64_t> failing_seed;
    std::string failure_message;
    std::string instance_dump;
};

struct VerifySummary {
    std::vector<FamilyResult> families;
    [[nodiscard]] bool passed() const;
};

/// Names of all families in execution order.
std::vector<std::string> verify_family_names();

/// Runs the named families (all when empty). Results do not depend on opts.jobs.
VerifySummary run_verify(const VerifyOptions& opts, const std::vector<std::string>& only = {});

}  // namespace hilbmod
