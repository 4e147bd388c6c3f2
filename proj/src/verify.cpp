#include "hilbmod/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "hilbmod/errors.hpp"
#include "hilbmod/fredholm.hpp"
#include "hilbmod/property_h.hpp"
#include "hilbmod/riesz.hpp"

namespace hilbmod {

namespace {

/// EP and orthogonal-decomposition threshold.
constexpr double kEpTol = 1e-8;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

// ---------------------------------------------------------------- command drivers

io::ReportFile run_analyze(const io::ProblemFile& problem, std::optional<double> rank_tol_override) {
    const auto start = std::chrono::steady_clock::now();
    io::ReportFile out;
    out.command = "analyze";
    out.input = problem;
    out.rank_tol = rank_tol_override.value_or(problem.rank_tol.value_or(0.0));
    out.solve_tol = problem.solve_tol.value_or(1e-8);

    const ModuleOperator c = problem.op();
    const RieszReport rep = riesz_decomposition(c, problem.lambda, out.rank_tol);
    const MatrixFormVerdict mf = matrix_form_check(rep, out.solve_tol);

    io::AnalysisSection a;
    a.r = rep.r;
    a.kernel_dims = rep.chain.kernel;
    a.range_dims = rep.chain.range;
    a.kernel_l = io::generator_list(kernel_generators(build_L(c, problem.lambda), out.rank_tol));
    a.kernel_lr = io::generator_list(rep.kernel);
    a.range_lr_dims = rep.range.dims();
    a.ep = rep.ep_residual <= kEpTol;
    a.ep_residual = rep.ep_residual;
    a.decomposition_residual = rep.decomposition_residual;
    a.theta_residual = rep.theta_residual;
    a.c_r_residual = rep.c_r_residual;
    a.projector_gap = rep.projector_gap;
    a.matrix_form_annihilation = mf.kernel_annihilation;
    a.matrix_form_invertible = mf.compression_invertible;
    a.matrix_form_condition = mf.condition_number;
    a.matrix_form_identity_gap = mf.identity_gap;
    out.analysis = std::move(a);
    out.timing_ms = elapsed_ms(start);
    return out;
}

io::ReportFile run_solve(const io::ProblemFile& problem, std::optional<double> rank_tol_override) {
    const auto start = std::chrono::steady_clock::now();
    io::ReportFile out;
    out.command = "solve";
    out.input = problem;
    out.rank_tol = rank_tol_override.value_or(problem.rank_tol.value_or(0.0));
    out.solve_tol = problem.solve_tol.value_or(1e-8);

    const SolveReport rep = analyze(problem.op(), problem.lambda, problem.rhs(), out.solve_tol, out.rank_tol);
    io::SolveSection s;
    s.solvable = rep.solvable;
    s.injective = rep.injective;
    s.residual_range_test = rep.residual_range_test;
    s.residual_orthogonality_test = rep.residual_orthogonality_test;
    if (rep.particular_solution)
        s.particular_solution = std::vector<CMatrix>(rep.particular_solution->blocks().begin(),
                                                     rep.particular_solution->blocks().end());
    s.solution_norm_bound = rep.solution_norm_bound;
    s.kernel_l = io::generator_list(rep.kernel);
    out.solve = std::move(s);
    out.timing_ms = elapsed_ms(start);
    return out;
}

// ---------------------------------------------------------------- instance families

Instance chain_instance(std::uint64_t base_seed, std::size_t index, Similarity similarity) {
    Rng rng(derive_seed(base_seed, index));
    std::vector<int> sizes(static_cast<std::size_t>(rng.uniform_int(1, 2)));
    for (auto& n : sizes) n = rng.uniform_int(1, 3);
    const int k = rng.uniform_int(1, 4);
    const int nmax = k * *std::max_element(sizes.begin(), sizes.end());
    GenSpec spec;
    spec.seed = derive_seed(base_seed ^ 0x5DEECE66DULL, index);
    spec.profile = BlockProfile(sizes);
    spec.k = k;
    spec.target_r = rng.uniform_int(0, std::min(3, nmax));
    spec.similarity = similarity;
    ModuleOperator c = gen_compact(spec);
    return {std::move(spec), std::move(c)};
}

SequencePrefix clustered_sequence(std::uint64_t seed, std::size_t length) {
    struct Choice {
        std::vector<int> sizes;
        int k;
    };
    static const std::vector<Choice> shapes = {{{1}, 1}, {{1}, 2}, {{1}, 4}, {{1}, 8},    {{2}, 1},
                                               {{2}, 2}, {{1, 1}, 2}, {{1, 1}, 4}, {{1, 2}, 1}};
    Rng rng(seed);
    const Choice& ch = shapes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(shapes.size()) - 1))];
    const ModuleShape shape(BlockProfile(ch.sizes), ch.k);

    const int clusters = rng.uniform_int(1, 4);
    std::vector<ModuleElement> centers;
    for (int j = 0; j < clusters; ++j) {
        ModuleElement x = random_element(shape, rng);
        centers.push_back(cplx(rng.uniform(0.2, 0.8) / element_norm(x), 0.0) * x);
    }
    std::vector<ModuleElement> terms;
    terms.reserve(length);
    for (std::size_t n = 0; n < length; ++n) {
        const ModuleElement& c = centers[static_cast<std::size_t>(rng.uniform_int(0, clusters - 1))];
        ModuleElement d = random_element(shape, rng);
        const double size = 0.15 * rng.uniform() / (1.0 + static_cast<double>(n) / 16.0);
        terms.push_back(c + cplx(size / element_norm(d), 0.0) * d);
    }
    return {shape, std::move(terms), 1.0};
}

// ---------------------------------------------------------------- verification suite

namespace {

struct Outcome {
    bool ok = true;
    double ratio = 0.0;
    std::uint64_t seed = 0;
    std::string message;
    std::string dump;

    /// value must not exceed threshold.
    void check(const std::string& what, double value, double threshold) {
        const double r = value / threshold;
        if (std::isnan(r)) {
            fail(what + " is NaN");
            return;
        }
        ratio = std::max(ratio, r);
        if (value > threshold) {
            std::ostringstream os;
            os << what << " = " << value << " exceeds " << threshold;
            fail(os.str());
        }
    }
    void require(const std::string& what, bool cond) {
        if (!cond) fail(what);
    }
    void fail(const std::string& msg) {
        if (ok) message = msg;
        ok = false;
    }
};

std::string dump_operator(const ModuleOperator& c) {
    return io::problem_to_json(io::problem_from_operator(c)).dump();
}

std::vector<Outcome> parallel_map(std::size_t n, int jobs, const std::function<Outcome(std::size_t)>& fn) {
    std::vector<Outcome> out(n);
    auto guarded = [&](std::size_t i) {
        try {
            out[i] = fn(i);
        } catch (const std::exception& e) {
            out[i].fail(std::string("exception: ") + e.what());
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) guarded(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) guarded(i);
        });
    pool.clear();
    return out;
}

FamilyResult reduce(std::string name, std::string description, const std::vector<Outcome>& outcomes) {
    FamilyResult r;
    r.name = std::move(name);
    r.description = std::move(description);
    r.instances = outcomes.size();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const Outcome& o = outcomes[i];
        r.worst_ratio = std::max(r.worst_ratio, o.ratio);
        if (o.ok) continue;
        ++r.failures;
        if (!r.failing_index) {
            r.failing_index = i;
            r.failing_seed = o.seed;
            r.failure_message = o.message;
            r.instance_dump = o.dump;
        }
    }
    r.passed = r.failures == 0;
    return r;
}

ModuleShape random_shape(Rng& rng) {
    std::vector<int> sizes(static_cast<std::size_t>(rng.uniform_int(1, 2)));
    for (auto& n : sizes) n = rng.uniform_int(1, 3);
    return {BlockProfile(sizes), rng.uniform_int(1, 3)};
}

Outcome algebra_case(std::uint64_t seed) {
    Outcome o;
    o.seed = seed;
    Rng rng(seed);
    std::vector<int> sizes(static_cast<std::size_t>(rng.uniform_int(1, 3)));
    for (auto& n : sizes) n = rng.uniform_int(1, 4);
    const BlockProfile p(sizes);
    const AlgebraElement a = random_algebra_element(p, rng);
    const AlgebraElement b = random_algebra_element(p, rng);
    o.check("||ab|| - ||a|| ||b||", a_norm(a_mul(a, b)) - a_norm(a) * a_norm(b), 1e-10);
    const double na = a_norm(a);
    o.check("| ||a*a|| - ||a||^2 |", std::abs(a_norm(a_mul(a.adjoint(), a)) - na * na), 1e-8 * (1 + na * na));
    o.require("a*a is positive", a_is_positive(a_mul(a.adjoint(), a), 1e-10));
    return o;
}

Outcome module_case(std::uint64_t seed) {
    Outcome o;
    o.seed = seed;
    Rng rng(seed);
    const ModuleShape shape = random_shape(rng);
    const ModuleElement x = random_element(shape, rng);
    const ModuleElement y = random_element(shape, rng);
    const AlgebraElement a = random_algebra_element(shape.profile(), rng);
    o.check("Cauchy-Schwarz ||<x,y>|| - ||x|| ||y||", a_norm(inner_product(x, y)) - element_norm(x) * element_norm(y),
            1e-10);
    o.check("||x a|| - ||x|| ||a||", element_norm(right_action(x, a)) - element_norm(x) * a_norm(a), 1e-10);

    std::vector<ModuleElement> gens;
    const int g = rng.uniform_int(1, 3);
    for (int t = 0; t < g; ++t) gens.push_back(random_element(shape, rng));
    if (rng.uniform() < 0.5) gens.push_back(right_action(gens.front(), random_algebra_element(shape.profile(), rng)));
    const Submodule f = submodule_from_generators(gens);
    const ModuleElement px = project_onto(f, x);
    const double scale = std::max(1.0, element_norm(x) * element_norm(y));
    o.check("||P(Px) - Px||", element_norm(project_onto(f, px) - px), 1e-10 * std::max(1.0, element_norm(x)));
    o.check("||<Px,y> - <x,Py>||", a_norm(inner_product(px, y) - inner_product(x, project_onto(f, y))),
            1e-10 * scale);
    for (const auto& gen : gens)
        o.check("||<g, x - Px>||", a_norm(inner_product(gen, x - px)),
                1e-10 * std::max(1.0, element_norm(gen) * element_norm(x)));
    const double d = distance_to_submodule(x, f);
    o.check("dist^2 - ||x||^2", d * d - element_norm(x) * element_norm(x), 1e-10);
    const Submodule fc = orthogonal_complement(f);
    for (std::size_t i = 0; i < shape.block_count(); ++i) {
        o.check("||Pi_F + Pi_Fperp - I||",
                linalg::spectral_norm(f.projector(i) + fc.projector(i) - CMatrix::Identity(shape.rows(i), shape.rows(i))),
                1e-10);
        o.require("dim F + dim Fperp = k n_i", f.dim(i) + fc.dim(i) == shape.rows(i));
    }
    o.require("<Px - x, Px - x> >= 0", a_is_positive(inner_product(x - px, x - px), 1e-10));
    return o;
}

ModuleOperator structured_operator(const ModuleShape& shape, Rng& rng) {
    switch (rng.uniform_int(0, 2)) {
        case 0:
            return random_operator(shape, rng);
        case 1: {  // rank deficient, generically not EP
            std::vector<CMatrix> blocks;
            for (std::size_t i = 0; i < shape.block_count(); ++i) {
                const Eigen::Index n = shape.rows(i);
                const Eigen::Index r = rng.uniform_int(0, static_cast<int>(n));
                blocks.push_back(random_matrix(n, r, rng) * random_matrix(r, n, rng));
            }
            return {shape, std::move(blocks)};
        }
        default: {  // EP: U (M + 0) U^H
            std::vector<CMatrix> blocks;
            for (std::size_t i = 0; i < shape.block_count(); ++i) {
                const Eigen::Index n = shape.rows(i);
                const Eigen::Index r = rng.uniform_int(0, static_cast<int>(n));
                CMatrix core = CMatrix::Zero(n, n);
                core.topLeftCorner(r, r) = random_matrix(r, r, rng) + 2.0 * CMatrix::Identity(r, r);
                const CMatrix u = random_unitary(n, rng);
                blocks.push_back(u * core * u.adjoint());
            }
            return {shape, std::move(blocks)};
        }
    }
}

Outcome operator_case(std::uint64_t seed, double rank_tol) {
    Outcome o;
    o.seed = seed;
    Rng rng(seed);
    const ModuleShape shape = random_shape(rng);
    const ModuleOperator t = structured_operator(shape, rng);
    o.dump = dump_operator(t);
    const ModuleElement x = random_element(shape, rng);
    const ModuleElement y = random_element(shape, rng);
    const double nt = operator_norm(t);
    o.check("||<Tx,y> - <x,T*y>||", a_norm(inner_product(apply(t, x), y) - inner_product(x, apply(adjoint(t), y))),
            1e-12 * std::max(1.0, nt * element_norm(x) * element_norm(y)));

    const ModuleOperator tp = moore_penrose(t, rank_tol);
    const double pen = 1e-10 * (1 + nt * nt);
    o.check("||T T+ T - T||", operator_norm(compose(t, compose(tp, t)) - t), pen);
    o.check("||T+ T T+ - T+||", operator_norm(compose(tp, compose(t, tp)) - tp), pen);
    o.check("||(T T+)* - T T+||", operator_norm(adjoint(compose(t, tp)) - compose(t, tp)), pen);
    o.check("||(T+ T)* - T+ T||", operator_norm(adjoint(compose(tp, t)) - compose(tp, t)), pen);

    o.check("||(T+)+ - T||", operator_norm(moore_penrose(tp, rank_tol) - t), 1e-10 * (1 + nt * nt));
    o.check("||(T*)+ - (T+)*||", operator_norm(moore_penrose(adjoint(t), rank_tol) - adjoint(tp)),
            1e-10 * (1 + nt * nt));

    const EpReport ep = is_ep(t, kEpTol, rank_tol);
    o.require("is_ep agrees with the range-projector comparison", ep.ep == (ep.range_projector_gap <= 10 * kEpTol));

    // lambda off the spectrum: the pseudoinverse solves (lambda I - T)x = f
    const cplx lambda(nt + 1.0 + rng.uniform(), rng.uniform(-1.0, 1.0));
    const ModuleOperator l = build_L(t, lambda);
    const ModuleElement f = random_element(shape, rng);
    o.check("off-spectrum pseudoinverse solve residual",
            element_norm(apply(l, apply(moore_penrose(l, rank_tol), f)) - f), 1e-8 * element_norm(f));

    ModuleOperator sum = ModuleOperator::zero(shape);
    for (int j = 0; j < shape.k(); ++j)
        sum += theta(ModuleElement::standard(shape, j), ModuleElement::standard(shape, j));
    o.require("sum_j theta(e_j, e_j) == I", sum == ModuleOperator::identity(shape));
    return o;
}

Outcome chain_case(const Instance& inst, double rank_tol) {
    Outcome o;
    o.seed = inst.spec.seed;
    o.dump = dump_operator(inst.c);
    const ModuleOperator l = build_L(inst.c, 1.0);
    const ChainDims chain = rank_chain(l, rank_tol);
    const int r = ascent_index(chain);  // throws on non-monotone chains or r != s
    const int target = *inst.spec.target_r;
    if (r != target) o.fail("ascent " + std::to_string(r) + " differs from target " + std::to_string(target));
    o.require("r <= k max n_i", r <= inst.c.shape().max_rows());
    for (int extra = 1; extra <= 3; ++extra) {
        const ModuleOperator lp = power(l, r + extra);
        const double cutoff = power_cutoff(l, r + extra, rank_tol);
        for (std::size_t i = 0; i < l.shape().block_count(); ++i) {
            const int ker = static_cast<int>(l.shape().rows(i) - linalg::rank(lp.block(i), cutoff));
            if (ker != chain.kernel[i][static_cast<std::size_t>(r)])
                o.fail("dim Ker(L^" + std::to_string(r + extra) + ") differs from dim Ker(L^r) in block " +
                       std::to_string(i));
        }
    }
    return o;
}

Outcome ep_case(const Instance& inst, double rank_tol, std::uint64_t seed) {
    Outcome o;
    o.seed = inst.spec.seed;
    o.dump = dump_operator(inst.c);
    const RieszReport rep = riesz_decomposition(inst.c, 1.0, rank_tol);
    o.check("||L^r (L^r)+ - (L^r)+ L^r||", rep.ep_residual, kEpTol);
    o.check("||Pi_Ker(L^r) + Pi_Ran(L^r) - I||", rep.decomposition_residual, kEpTol);
    Rng rng(seed);
    const ModuleElement x = random_element(inst.c.shape(), rng);
    const ModuleElement rest = x - apply(rep.projector_p, x);
    o.check("(I - P)x off Ran(L^r)", distance_to_submodule(rest, rep.range), kEpTol * element_norm(x));
    return o;
}

Outcome direct_sum_case(const Instance& inst, double rank_tol, std::uint64_t seed) {
    Outcome o;
    o.seed = inst.spec.seed;
    o.dump = dump_operator(inst.c);
    const RieszReport rep = riesz_decomposition(inst.c, 1.0, rank_tol);
    o.require("Ker(L^r) + Ran(L^r) is direct and spans E", rep.direct_sum_deficit == 0);
    const ModuleOperator& q = rep.projector_oblique;
    const double nq = operator_norm(q);
    o.check("||Q^2 - Q||", operator_norm(compose(q, q) - q), 1e-8 * (1 + nq * nq));
    Rng rng(seed);
    const ModuleElement x = random_element(inst.c.shape(), rng);
    const ModuleElement qx = apply(q, x);
    const double scale = std::max(1.0, operator_norm(rep.l_power)) * std::max(1.0, nq) * element_norm(x);
    o.check("||L^r Q x||", element_norm(apply(rep.l_power, qx)), 1e-8 * scale);
    o.check("(I - Q)x off Ran(L^r)", distance_to_submodule(x - qx, rep.range), 1e-8 * std::max(1.0, nq) * element_norm(x));
    const bool ep = rep.ep_residual <= kEpTol;
    if (ep) o.check("||P - Q|| on an EP instance", rep.projector_gap, 10 * kEpTol);
    return o;
}

Outcome projection_case(const Instance& inst, double rank_tol, std::uint64_t seed) {
    Outcome o;
    o.seed = inst.spec.seed;
    o.dump = dump_operator(inst.c);
    const RieszReport rep = riesz_decomposition(inst.c, 1.0, rank_tol);
    const ModuleOperator& p = rep.projector_p;
    o.check("||P^2 - P||", operator_norm(compose(p, p) - p), 1e-10);
    o.check("||P* - P||", operator_norm(adjoint(p) - p), 1e-10);
    o.check("||theta sum - P||", rep.theta_residual, 1e-8);
    {
        Rng split(derive_seed(seed, 1));
        const ModuleElement x = random_element(inst.c.shape(), split);
        o.check("||L^r P x||", element_norm(apply(rep.l_power, apply(p, x))), 1e-8 * element_norm(x));
    }
    const MatrixFormVerdict mf = matrix_form_check(rep, 1e-8);
    o.require("matrix form: L^r vanishes on Ker(L^r), compression invertible", mf.ok);

    const ModuleOperator reg = regularizer(inst.c, 1.0, rep, 1e-12);
    const double cond = operator_condition(reg);
    Rng rng(seed);
    for (int t = 0; t < 50; ++t) {
        const ModuleElement f = random_element(inst.c.shape(), rng);
        const ModuleElement y = solve_regularized(inst.c, 1.0, rep, f, 1e-8);
        o.check("(L - P) solve relative residual", element_norm(apply(reg, y) - f) / element_norm(f), 1e-8 * cond);
    }
    return o;
}

Outcome c_r_case(const Instance& inst, double rank_tol) {
    Outcome o;
    o.seed = inst.spec.seed;
    o.dump = dump_operator(inst.c);
    const RieszReport rep = riesz_decomposition(inst.c, 1.0, rank_tol);
    o.check("||(I - C)^r - (I - C_r)||", rep.c_r_residual, 1e-10 * std::pow(1 + operator_norm(inst.c), rep.r));
    return o;
}

Outcome fredholm_case(const Instance& inst, double rank_tol, std::uint64_t seed) {
    Outcome o;
    o.seed = inst.spec.seed;
    o.dump = dump_operator(inst.c);
    const double tol = 1e-8;
    const ModuleShape& shape = inst.c.shape();
    const ModuleOperator l = build_L(inst.c, 1.0);
    Rng rng(seed);
    for (int t = 0; t < 5; ++t) {
        // alternate right-hand sides inside Ran(L) with unconstrained ones
        const ModuleElement w = random_element(shape, rng);
        const ModuleElement f = (t % 2 == 0) ? apply(l, w) : w;
        const SolveReport rep = analyze(inst.c, 1.0, f, tol, rank_tol);
        const double s = tol * std::max(1.0, element_norm(f));
        const bool by_range = rep.residual_range_test <= s;
        const bool by_orth = rep.residual_orthogonality_test <= s;
        o.require("range and Ker(L*) tests agree",
                  by_range == by_orth || std::max(rep.residual_range_test, rep.residual_orthogonality_test) <= 10 * s);
        if (rep.injective) {
            o.require("injective L gives a solvable equation", rep.solvable);
            const ModuleElement x = solve_unique(inst.c, 1.0, f, tol, rank_tol);
            o.check("||x|| - bound ||f||", element_norm(x) - *rep.solution_norm_bound * element_norm(f), 1e-8);
        } else {
            o.require("non-injective: solvable iff both tests pass", rep.solvable == (by_range && by_orth));
        }
        if (!rep.solvable) continue;
        o.check("||L x0 - f||", element_norm(apply(l, *rep.particular_solution) - f), s);
        std::vector<ModuleElement> sols;
        for (int c = 0; c < 5; ++c) {
            std::vector<AlgebraElement> coeffs;
            for (int j = 0; j < rep.kernel.count(); ++j) coeffs.push_back(random_algebra_element(shape.profile(), rng));
            ModuleElement x = general_solution(rep, coeffs);
            o.check("||L x - f|| (general solution)", element_norm(apply(l, x) - f), s);
            o.check("||x0|| - ||x|| (minimal norm)", element_norm(*rep.particular_solution) - element_norm(x), 1e-8);
            sols.push_back(std::move(x));
        }
        o.check("difference of solutions off Ker(L)", distance_to_submodule(sols[0] - sols[1], rep.kernel.span),
                1e-8 * std::max(1.0, element_norm(sols[0] - sols[1])));
    }
    return o;
}

Outcome property_h_case(std::uint64_t seed, double rank_tol) {
    Outcome o;
    o.seed = seed;
    const double eps = 0.2;
    const SequencePrefix seq = clustered_sequence(seed, 512);
    const Subsequence sub = extract_convergent_subsequence(seq, eps, 16);
    o.require("at least 16 clustered indices", sub.enough);
    o.check("cluster diameter", sub.diameter, eps);
    Rng rng(derive_seed(seed, 1));
    for (int t = 0; t < 5; ++t) {
        GenSpec spec;
        spec.seed = derive_seed(seed, 100 + static_cast<std::uint64_t>(t));
        spec.profile = seq.shape().profile();
        spec.k = seq.shape().k();
        spec.norm_cap = 4.0;
        const ModuleOperator c = gen_compact(spec);
        o.check("compactness transfer", verify_compactness_transfer(seq, sub.indices, sub.limit, c),
                operator_norm(c) * sub.diameter + 1e-10);
    }
    std::vector<ModuleElement> probes;
    for (int j = 0; j < seq.shape().k(); ++j) probes.push_back(ModuleElement::standard(seq.shape(), j));
    for (int t = 0; t < 8; ++t) probes.push_back(random_element(seq.shape(), rng));
    for (const auto& v : probes) {
        double worst = 0.0;
        for (std::size_t i : sub.indices)
            worst = std::max(worst, a_norm(inner_product(v, seq[i]) - inner_product(v, sub.limit)));
        o.check("inner-product convergence against probe", worst, element_norm(v) * eps + 1e-10);
    }
    // nearest kernel point is a minimizer
    GenSpec ls;
    ls.seed = derive_seed(seed, 200);
    ls.profile = seq.shape().profile();
    ls.k = seq.shape().k();
    ls.target_r = 1;
    const ModuleOperator l = build_L(gen_compact(ls), 1.0);
    const ModuleElement x = random_element(seq.shape(), rng);
    const NearestPoint np = nearest_kernel_point(l, x, rank_tol);
    const KernelData ker = kernel_generators(l, rank_tol);
    for (int t = 0; t < 100; ++t) {
        ModuleElement u = ModuleElement::zero(seq.shape());
        for (const auto& g : ker.generators) u += right_action(g, random_algebra_element(seq.shape().profile(), rng));
        o.check("delta - ||x - u'||", np.delta - element_norm(x - u), 1e-10);
    }
    return o;
}

struct FamilySpec {
    std::string name;
    std::string description;
};

const std::vector<FamilySpec>& families() {
    static const std::vector<FamilySpec> list = {
        {"algebra", "C*-identity, submultiplicativity, positivity of a*a"},
        {"module", "Cauchy-Schwarz, projections, E = F + F^perp"},
        {"operators", "adjoint duality, Penrose identities, EP criteria, sum theta(e_j, e_j) = I"},
        {"chain", "kernel/range chains monotone, settle together at the generated index"},
        {"ep", "L^r is EP: ||L^r (L^r)+ - (L^r)+ L^r|| and ||Pi_Ker + Pi_Ran - I|| <= 1e-8"},
        {"direct_sum", "Ker(L^r) + Ran(L^r) = E as a direct sum; spectral projector along Ran(L^r)"},
        {"projection", "P orthogonal projector, theta-sum form, L - P invertible"},
        {"c_r", "(I - C)^r = I - C_r"},
        {"fredholm", "Fredholm alternative, residuals, general and minimal-norm solutions"},
        {"property_h", "eps-clusters of bounded sequences, compactness transfer, nearest kernel points"},
    };
    return list;
}

}  // namespace

bool VerifySummary::passed() const {
    return std::all_of(families.begin(), families.end(), [](const FamilyResult& f) { return f.passed; });
}

std::vector<std::string> verify_family_names() {
    std::vector<std::string> names;
    for (const auto& f : families()) names.push_back(f.name);
    return names;
}

VerifySummary run_verify(const VerifyOptions& opts, const std::vector<std::string>& only) {
    const std::size_t n = opts.count;
    const double tol = opts.rank_tol;

    // generated instances are shared by the chain-based families
    std::vector<std::optional<Instance>> instances(n);
    std::vector<std::string> gen_errors(n);
    parallel_map(n, opts.jobs, [&](std::size_t i) {
        try {
            instances[i] = chain_instance(opts.seed, i);
        } catch (const std::exception& e) {
            gen_errors[i] = e.what();
        }
        return Outcome{};
    });

    auto over_instances = [&](const std::function<Outcome(const Instance&, std::size_t)>& fn) {
        return parallel_map(n, opts.jobs, [&](std::size_t i) {
            if (!instances[i]) {
                Outcome o;
                o.fail("instance generation failed: " + gen_errors[i]);
                return o;
            }
            return fn(*instances[i], i);
        });
    };
    auto sub_seed = [&](std::uint64_t family, std::size_t i) {
        return derive_seed(opts.seed + 0x1000 * family, i);
    };

    VerifySummary summary;
    for (const auto& fam : families()) {
        if (!only.empty() && std::find(only.begin(), only.end(), fam.name) == only.end()) continue;
        std::vector<Outcome> res;
        if (fam.name == "algebra")
            res = parallel_map(n, opts.jobs, [&](std::size_t i) { return algebra_case(sub_seed(1, i)); });
        else if (fam.name == "module")
            res = parallel_map(n, opts.jobs, [&](std::size_t i) { return module_case(sub_seed(2, i)); });
        else if (fam.name == "operators")
            res = parallel_map(n, opts.jobs, [&](std::size_t i) { return operator_case(sub_seed(3, i), tol); });
        else if (fam.name == "chain")
            res = over_instances([&](const Instance& in, std::size_t) { return chain_case(in, tol); });
        else if (fam.name == "ep")
            res = over_instances([&](const Instance& in, std::size_t i) { return ep_case(in, tol, sub_seed(5, i)); });
        else if (fam.name == "direct_sum")
            res = over_instances(
                [&](const Instance& in, std::size_t i) { return direct_sum_case(in, tol, sub_seed(6, i)); });
        else if (fam.name == "projection")
            res = over_instances(
                [&](const Instance& in, std::size_t i) { return projection_case(in, tol, sub_seed(7, i)); });
        else if (fam.name == "c_r")
            res = over_instances([&](const Instance& in, std::size_t) { return c_r_case(in, tol); });
        else if (fam.name == "fredholm")
            res = over_instances(
                [&](const Instance& in, std::size_t i) { return fredholm_case(in, tol, sub_seed(9, i)); });
        else if (fam.name == "property_h")
            res = parallel_map(std::min<std::size_t>(n, 20), opts.jobs,
                               [&](std::size_t i) { return property_h_case(sub_seed(10, i), tol); });
        summary.families.push_back(reduce(fam.name, fam.description, res));
    }
    return summary;
}

}  // namespace hilbmod
