#include "helpers.hpp"

#include "hilbmod/algebra.hpp"
#include "hilbmod/errors.hpp"

using namespace hilbmod;
using namespace testing_support;

namespace {

AlgebraElement m2(const CMatrix& m) { return {BlockProfile({2}), {m}}; }

AlgebraElement pair(cplx a, cplx b) { return {BlockProfile({1, 1}), {mat({{a}}), mat({{b}})}}; }

const cplx I{0.0, 1.0};

}  // namespace

TEST_SUITE("algebra") {
    TEST_CASE("block profile validation") {
        CHECK_THROWS_AS(BlockProfile({}), InvalidParameter);
        CHECK_THROWS_AS(BlockProfile({2, 0}), InvalidParameter);
        const BlockProfile p({1, 3});
        CHECK(p.dimension() == 10);
        CHECK(p.max_size() == 3);
        CHECK_THROWS_AS(AlgebraElement(p, {mat({{1.0}})}), ShapeError);
    }

    TEST_CASE("matrix units multiply") {
        const AlgebraElement e12 = m2(mat({{0, 1}, {0, 0}}));
        const AlgebraElement e21 = m2(mat({{0, 0}, {1, 0}}));
        CHECK(a_mul(e12, e21) == m2(mat({{1, 0}, {0, 0}})));
        CHECK(a_mul(e12, e12) == AlgebraElement::zero(BlockProfile({2})));
    }

    TEST_CASE("componentwise product in C + C") {
        CHECK(a_mul(pair(2.0, 3.0 * I), pair(1.0, -I)) == pair(2.0, 3.0));
    }

    TEST_CASE("mismatched profiles are rejected") {
        CHECK_THROWS_AS(a_mul(pair(1.0, 1.0), m2(mat({{1, 0}, {0, 1}}))), ShapeError);
    }

    TEST_CASE("norm examples") {
        CHECK(a_norm(m2(mat({{0, 2}, {0, 0}}))) == doctest::Approx(2.0));
        CHECK(a_norm(pair(3.0, -4.0 * I)) == doctest::Approx(4.0));
        CHECK(a_norm(AlgebraElement::identity(BlockProfile({2}))) == doctest::Approx(1.0));
    }

    TEST_CASE("positivity examples") {
        CHECK(a_is_positive(m2(mat({{1, 0}, {0, 0}})), 1e-10));
        CHECK_FALSE(a_is_positive(m2(mat({{0, 1}, {1, 0}})), 1e-10));
        CHECK(a_is_positive(AlgebraElement::zero(BlockProfile({2, 1})), 1e-10));
        CHECK_FALSE(a_is_positive(m2(mat({{1, 1}, {0, 1}})), 1e-10));
    }

    TEST_CASE("property: C*-identity, submultiplicativity, positivity of a*a") {
        Rng rng(11);
        for (int t = 0; t < 200; ++t) {
            std::vector<int> sizes(static_cast<std::size_t>(rng.uniform_int(1, 3)));
            for (auto& n : sizes) n = rng.uniform_int(1, 4);
            const BlockProfile p(sizes);
            const AlgebraElement a = random_algebra_element(p, rng);
            const AlgebraElement b = random_algebra_element(p, rng);
            CHECK(a_norm(a_mul(a, b)) <= a_norm(a) * a_norm(b) + 1e-10);
            const double na = a_norm(a);
            CHECK(std::abs(a_norm(a_mul(a.adjoint(), a)) - na * na) <= 1e-8 * (1 + na * na));
            CHECK(a_is_positive(a_mul(a.adjoint(), a), 1e-10));
            CHECK(a.adjoint().adjoint() == a);
        }
    }
}
