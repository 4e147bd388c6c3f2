#include "helpers.hpp"

#include "hilbmod/errors.hpp"
#include "hilbmod/fredholm.hpp"
#include "hilbmod/riesz.hpp"
#include "hilbmod/verify.hpp"

using namespace hilbmod;
using namespace testing_support;

namespace {

const CMatrix N2 = mat({{0, 1}, {0, 0}});

ModuleOperator c_for(const CMatrix& l) { return op(CMatrix(CMatrix::Identity(l.rows(), l.cols()) - l)); }

}  // namespace

TEST_SUITE("fredholm") {
    TEST_CASE("C = 0: unique solution x0 = f with bound 1") {
        Rng rng(1);
        const ModuleShape shape(BlockProfile({2, 1}), 2);
        const ModuleElement f = random_element(shape, rng);
        const SolveReport rep = analyze(ModuleOperator::zero(shape), 1.0, f);
        CHECK(rep.injective);
        CHECK(rep.solvable);
        CHECK(gap(*rep.particular_solution, f) < 1e-14);
        CHECK(*rep.solution_norm_bound == doctest::Approx(1.0));
        CHECK(gap(solve_unique(ModuleOperator::zero(shape), 1.0, f), f) < 1e-14);
    }

    TEST_CASE("nilpotent L with f = e_1 is solvable with x0 = e_2") {
        const ModuleOperator c = c_for(N2);
        const SolveReport rep = analyze(c, 1.0, vec({1.0, 0.0}));
        CHECK(rep.solvable);
        CHECK_FALSE(rep.injective);
        // oracle: L+ = [[0,0],[1,0]] maps e_1 to e_2
        CHECK(gap(*rep.particular_solution, apply(op({{0, 0}, {1, 0}}), vec({1.0, 0.0}))) < 1e-14);
        CHECK(gap(*rep.particular_solution, vec({0.0, 1.0})) < 1e-14);
        REQUIRE(rep.kernel.count() == 1);
        CHECK(gap(rep.kernel.generators[0], vec({1.0, 0.0})) < 1e-14);
        CHECK_FALSE(rep.solution_norm_bound.has_value());
    }

    TEST_CASE("nilpotent L with f = e_2 is unsolvable with residual 1") {
        const SolveReport rep = analyze(c_for(N2), 1.0, vec({0.0, 1.0}));
        CHECK_FALSE(rep.solvable);
        CHECK(rep.residual_range_test == doctest::Approx(1.0));
        CHECK(rep.residual_orthogonality_test == doctest::Approx(1.0));
        CHECK_FALSE(rep.particular_solution.has_value());
        CHECK_THROWS_AS(general_solution(rep, std::vector<AlgebraElement>{}), InvalidState);
    }

    TEST_CASE("general solution examples") {
        const SolveReport rep = analyze(c_for(N2), 1.0, vec({1.0, 0.0}));
        const BlockProfile p({1});
        const std::vector<AlgebraElement> zero = {AlgebraElement::zero(p)};
        CHECK(gap(general_solution(rep, zero), *rep.particular_solution) < 1e-14);
        const std::vector<AlgebraElement> three = {AlgebraElement::scalar(p, 3.0)};
        const ModuleElement x = general_solution(rep, three);
        CHECK(gap(x, vec({3.0, 1.0})) < 1e-14);
        CHECK(gap(apply(op(N2), x), vec({1.0, 0.0})) < 1e-14);
        CHECK_THROWS_AS(general_solution(rep, std::vector<AlgebraElement>{}), ShapeError);
    }

    TEST_CASE("general solution over M_2 with a matrix coefficient") {
        // L = e_22 on M_2: kernel generated by e_11, f in the range
        const CMatrix e22 = mat({{0, 0}, {0, 1}});
        const ModuleOperator c = m2_op(CMatrix(CMatrix::Identity(2, 2) - e22));
        const ModuleElement f = m2_elem(mat({{0, 0}, {2, cplx(0, 1)}}));
        const SolveReport rep = analyze(c, 1.0, f);
        REQUIRE(rep.solvable);
        REQUIRE(rep.kernel.count() == 1);
        const std::vector<AlgebraElement> a = {AlgebraElement(BlockProfile({2}), {mat({{0, 1}, {0, 0}})})};
        const ModuleElement x = general_solution(rep, a);
        CHECK(gap(apply(m2_op(e22), x), f) <= 1e-8 * std::max(1.0, element_norm(f)));
        CHECK(gap(x, *rep.particular_solution) > 0.5);
    }

    TEST_CASE("solve_unique examples") {
        CHECK(gap(solve_unique(op(CMatrix(0.5 * CMatrix::Identity(2, 2))), 1.0, vec({1.0, 0.0})), vec({2.0, 0.0})) <
              1e-14);
        CHECK(gap(solve_unique(ModuleOperator::identity(scalar_shape(2)), 2.0, vec({3.0, 0.0})), vec({3.0, 0.0})) <
              1e-14);
        CHECK_THROWS_AS(solve_unique(c_for(N2), 1.0, vec({1.0, 0.0})), FredholmAlternativeError);
    }

    TEST_CASE("solve_regularized examples") {
        const ModuleShape shape(BlockProfile({1}), 2);
        const ModuleOperator zero = ModuleOperator::zero(shape);
        const ModuleElement f = vec({cplx(1, 2), 3.0});
        CHECK(gap(solve_regularized(zero, 1.0, riesz_decomposition(zero, 1.0), f), f) < 1e-14);

        const ModuleOperator cn = c_for(N2);
        CHECK(gap(solve_regularized(cn, 1.0, riesz_decomposition(cn, 1.0), vec({0.0, 1.0})), vec({-1.0, -1.0})) <
              1e-14);

        const ModuleOperator cd = c_for(mat({{0, 0}, {0, 1}}));
        CHECK(gap(solve_regularized(cd, 1.0, riesz_decomposition(cd, 1.0), vec({1.0, 1.0})), vec({-1.0, 1.0})) <
              1e-14);
    }

    TEST_CASE("property: alternative dichotomy, homogeneous structure, minimal norm, continuity") {
        for (std::size_t i = 0; i < 200; ++i) {
            const Instance in = chain_instance(4242, i);
            const ModuleShape& shape = in.c.shape();
            const ModuleOperator l = build_L(in.c, 1.0);
            Rng rng(derive_seed(99, i));
            const ModuleElement w = random_element(shape, rng);
            const ModuleElement f = (i % 2 == 0) ? apply(l, w) : w;
            const SolveReport rep = analyze(in.c, 1.0, f);
            const double s = 1e-8 * std::max(1.0, element_norm(f));
            const bool by_range = rep.residual_range_test <= s;
            const bool by_orth = rep.residual_orthogonality_test <= s;
            CHECK((by_range == by_orth || std::max(rep.residual_range_test, rep.residual_orthogonality_test) <= 10 * s));
            if (rep.injective) {
                CHECK(rep.solvable);
                CHECK(rep.kernel.count() == 0);
                const ModuleElement x = solve_unique(in.c, 1.0, f);
                CHECK(element_norm(x) <= *rep.solution_norm_bound * element_norm(f) + 1e-8);
            } else {
                CHECK(rep.solvable == (by_range && by_orth));
            }
            if (i % 2 == 0) CHECK(rep.solvable);
            if (!rep.solvable) continue;
            CHECK(gap(apply(l, *rep.particular_solution), f) <= s);
            std::vector<ModuleElement> sols;
            for (int t = 0; t < 3; ++t) {
                std::vector<AlgebraElement> coeffs;
                for (int j = 0; j < rep.kernel.count(); ++j)
                    coeffs.push_back(random_algebra_element(shape.profile(), rng));
                sols.push_back(general_solution(rep, coeffs));
                CHECK(gap(apply(l, sols.back()), f) <= s);
                CHECK(element_norm(*rep.particular_solution) <= element_norm(sols.back()) + 1e-8);
            }
            const ModuleElement diff = sols[0] - sols[1];
            CHECK(distance_to_submodule(diff, rep.kernel.span) <= 1e-8 * std::max(1.0, element_norm(diff)));
        }
    }
}
