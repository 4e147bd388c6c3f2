#include "helpers.hpp"

#include <Eigen/QR>

#include "hilbmod/errors.hpp"
#include "hilbmod/operators.hpp"
#include "hilbmod/riesz.hpp"

using namespace hilbmod;
using namespace testing_support;

namespace {

const CMatrix N2 = mat({{0, 1}, {0, 0}});

/// Penrose residuals of tp as a candidate pseudoinverse of t.
double penrose_residual(const ModuleOperator& t, const ModuleOperator& tp) {
    const ModuleOperator ttp = compose(t, tp);
    const ModuleOperator tpt = compose(tp, t);
    return std::max({gap(compose(ttp, t), t), gap(compose(tpt, tp), tp), gap(adjoint(ttp), ttp),
                     gap(adjoint(tpt), tpt)});
}

/// Independent pseudoinverse via a complete orthogonal decomposition.
ModuleOperator cod_pinv(const ModuleOperator& t) {
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < t.shape().block_count(); ++i) {
        Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(t.block(i));
        cod.setThreshold(1e-10);
        blocks.push_back(cod.pseudoInverse());
    }
    return {t.shape(), std::move(blocks)};
}

ModuleOperator random_rank_deficient(const ModuleShape& shape, Rng& rng) {
    std::vector<CMatrix> blocks;
    for (std::size_t i = 0; i < shape.block_count(); ++i) {
        const Eigen::Index n = shape.rows(i);
        const Eigen::Index r = rng.uniform_int(0, static_cast<int>(n));
        blocks.push_back(random_matrix(n, r, rng) * random_matrix(r, n, rng));
    }
    return {shape, std::move(blocks)};
}

}  // namespace

TEST_SUITE("operators") {
    TEST_CASE("apply examples") {
        Rng rng(5);
        const ModuleShape shape(BlockProfile({2, 3}), 2);
        const ModuleElement x = random_element(shape, rng);
        CHECK(apply(ModuleOperator::identity(shape), x) == x);
        CHECK(apply(ModuleOperator::zero(shape), x) == ModuleElement::zero(shape));
        CHECK(apply(op(N2), vec({0.0, 1.0})) == vec({1.0, 0.0}));
    }

    TEST_CASE("adjoint examples") {
        CHECK(adjoint(op(N2)) == op({{0, 0}, {1, 0}}));
        const ModuleOperator h = op({{2, cplx(1, 1)}, {cplx(1, -1), 3}});
        CHECK(adjoint(h) == h);
        Rng rng(6);
        const ModuleOperator t = random_operator(ModuleShape(BlockProfile({2, 1}), 2), rng);
        CHECK(adjoint(adjoint(t)) == t);
    }

    TEST_CASE("theta examples") {
        CHECK(theta(vec({1.0, 0.0}), vec({0.0, 1.0})) == op(N2));
        Rng rng(7);
        for (int t = 0; t < 20; ++t) {
            const ModuleShape shape = random_shape(rng);
            const ModuleElement x = random_element(shape, rng), y = random_element(shape, rng);
            const ModuleElement u = random_element(shape, rng), v = random_element(shape, rng);
            CHECK(gap(adjoint(theta(x, y)), theta(y, x)) <= 1e-14 * (1 + element_norm(x) * element_norm(y)));
            // theta(x,y) theta(u,v) z = x <y,u> <v,z>
            const ModuleOperator lhs = compose(theta(x, y), theta(u, v));
            const ModuleOperator rhs = theta(right_action(x, inner_product(y, u)), v);
            const double scale = element_norm(x) * element_norm(y) * element_norm(u) * element_norm(v);
            CHECK(gap(lhs, rhs) <= 1e-12 * std::max(1.0, scale));
        }
    }

    TEST_CASE("standard generators reconstruct the identity exactly") {
        for (const auto& shape : {ModuleShape(BlockProfile({1}), 3), ModuleShape(BlockProfile({2, 3}), 2)}) {
            ModuleOperator sum = ModuleOperator::zero(shape);
            for (int j = 0; j < shape.k(); ++j)
                sum += theta(ModuleElement::standard(shape, j), ModuleElement::standard(shape, j));
            CHECK(sum == ModuleOperator::identity(shape));
        }
    }

    TEST_CASE("operator norm examples") {
        CHECK(operator_norm(ModuleOperator::identity(scalar_shape(3))) == doctest::Approx(1.0));
        CHECK(operator_norm(op({{0, 2}, {0, 0}})) == doctest::Approx(2.0));
        const ModuleShape cc(BlockProfile({1, 1}), 1);
        CHECK(operator_norm(ModuleOperator(cc, {mat({{3.0}}), mat({{-4.0}})})) == doctest::Approx(4.0));
    }

    TEST_CASE("spectrum examples") {
        const ModuleShape cc(BlockProfile({1, 1}), 1);
        const auto s = spectrum(ModuleOperator(cc, {mat({{1.0}}), mat({{0.5}})}), 1e-10);
        REQUIRE(s.size() == 2);
        CHECK(std::abs(s[0] - 0.5) < 1e-14);
        CHECK(std::abs(s[1] - 1.0) < 1e-14);
        const auto id = spectrum(ModuleOperator::identity(ModuleShape(BlockProfile({2, 1}), 2)), 1e-10);
        REQUIRE(id.size() == 1);
        CHECK(std::abs(id[0] - 1.0) < 1e-14);
        const auto nil = spectrum(op(N2), 1e-6);
        REQUIRE(nil.size() == 1);
        CHECK(std::abs(nil[0]) < 1e-6);
    }

    TEST_CASE("Moore-Penrose examples") {
        const ModuleOperator np = moore_penrose(op(N2));
        CHECK(gap(np, op({{0, 0}, {1, 0}})) < 1e-14);
        CHECK(gap(np, cod_pinv(op(N2))) < 1e-14);
        CHECK(gap(moore_penrose(op({{2, 0}, {0, 0}})), op({{0.5, 0}, {0, 0}})) < 1e-14);
        const ModuleShape shape(BlockProfile({2}), 2);
        CHECK(gap(moore_penrose(ModuleOperator::identity(shape)), ModuleOperator::identity(shape)) < 1e-14);
        CHECK(gap(moore_penrose(ModuleOperator::zero(shape)), ModuleOperator::zero(shape)) == 0.0);
    }

    TEST_CASE("EP examples") {
        CHECK(is_ep(ModuleOperator::identity(scalar_shape(2)), 1e-8).ep);
        const EpReport nil = is_ep(op(N2), 1e-8);
        CHECK_FALSE(nil.ep);
        // Ran = span e_1 and Ran* = span e_2: the range projectors differ by a unit
        CHECK(nil.range_projector_gap == doctest::Approx(1.0));
        const EpReport d = is_ep(op({{2, 0}, {0, 0}}), 1e-8);
        CHECK(d.ep);
        CHECK(d.commutator_residual < 1e-14);
    }

    TEST_CASE("kernel generators examples") {
        const KernelData nil = kernel_generators(op(N2));
        CHECK(exact_nullity(N2) == 1);
        REQUIRE(nil.count() == 1);
        CHECK(gap(nil.generators[0], vec({1.0, 0.0})) < 1e-14);

        const CMatrix e22 = mat({{0, 0}, {0, 1}});
        const KernelData m = kernel_generators(m2_op(e22));
        CHECK(exact_nullity(e22) == 1);
        REQUIRE(m.count() == 1);  // ceil(1 / 2)
        CHECK(gap(m.generators[0], m2_elem(mat({{1, 0}, {0, 0}}))) < 1e-14);
        CHECK(m.span.contains(m2_elem(mat({{3, cplx(0, 1)}, {0, 0}})), 1e-12));
        CHECK_FALSE(m.span.contains(m2_elem(mat({{0, 0}, {1, 0}})), 1e-12));

        const KernelData z = kernel_generators(ModuleOperator::zero(scalar_shape(2)));
        REQUIRE(z.count() == 2);
        CHECK(gap(z.generators[0], vec({1.0, 0.0})) < 1e-14);
        CHECK(gap(z.generators[1], vec({0.0, 1.0})) < 1e-14);

        CHECK(kernel_generators(ModuleOperator::identity(scalar_shape(2))).count() == 0);
    }

    TEST_CASE("range submodule examples") {
        const ModuleShape shape(BlockProfile({2, 1}), 2);
        const Submodule full = range_submodule(ModuleOperator::identity(shape));
        CHECK(full.dims() == std::vector<int>{4, 2});
        CHECK(range_submodule(ModuleOperator::zero(shape)).dims() == std::vector<int>{0, 0});
        const Submodule r = range_submodule(op(N2));
        CHECK(r.dim(0) == 1);
        CHECK(gap(r.projector(0), mat({{1, 0}, {0, 0}})) < 1e-14);
    }

    TEST_CASE("projector onto a submodule is an orthogonal projection") {
        const Submodule r = range_submodule(op(N2));
        const ModuleOperator p = projector_onto(r);
        CHECK(gap(compose(p, p), p) < 1e-14);
        CHECK(gap(adjoint(p), p) < 1e-14);
    }

    TEST_CASE("property: adjoint duality, Penrose identities, EP agreement") {
        Rng rng(31);
        for (int t = 0; t < 100; ++t) {
            const ModuleShape shape = random_shape(rng);
            const ModuleOperator m = (t % 2 == 0) ? random_operator(shape, rng) : random_rank_deficient(shape, rng);
            const ModuleElement x = random_element(shape, rng), y = random_element(shape, rng);
            const double nt = operator_norm(m);
            CHECK(a_norm(inner_product(apply(m, x), y) - inner_product(x, apply(adjoint(m), y))) <=
                  1e-12 * std::max(1.0, nt * element_norm(x) * element_norm(y)));

            const ModuleOperator mp = moore_penrose(m);
            CHECK(penrose_residual(m, mp) <= 1e-10 * (1 + nt * nt));
            CHECK(gap(moore_penrose(mp), m) <= 1e-10 * (1 + nt * nt));
            CHECK(gap(moore_penrose(adjoint(m)), adjoint(mp)) <= 1e-10 * (1 + nt * nt));

            // uniqueness: an independently computed candidate passing the identities coincides
            const ModuleOperator other = cod_pinv(m);
            if (penrose_residual(m, other) <= 1e-10) CHECK(gap(other, mp) <= 1e-6);

            const EpReport ep = is_ep(m, 1e-8);
            CHECK(ep.ep == (ep.range_projector_gap <= 1e-7));
            const bool same_ranges =
                gap(projector_onto(range_submodule(m)), projector_onto(range_submodule(adjoint(m)))) <= 1e-7;
            CHECK(ep.ep == same_ranges);

            const cplx lambda(nt + 1.0, 0.5);
            const ModuleElement f = random_element(shape, rng);
            const ModuleOperator l = build_L(m, lambda);
            CHECK(gap(apply(l, apply(moore_penrose(l), f)), f) <= 1e-8 * element_norm(f));
        }
    }

    TEST_CASE("shape mismatches throw") {
        CHECK_THROWS_AS(compose(op(N2), ModuleOperator::identity(scalar_shape(3))), ShapeError);
        CHECK_THROWS_AS(apply(op(N2), vec({1.0, 2.0, 3.0})), ShapeError);
        CHECK_THROWS_AS(power(op(N2), -1), InvalidParameter);
    }
}
