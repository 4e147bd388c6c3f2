#include "helpers.hpp"

#include <algorithm>

#include "hilbmod/errors.hpp"
#include "hilbmod/property_h.hpp"
#include "hilbmod/riesz.hpp"
#include "hilbmod/verify.hpp"

using namespace hilbmod;
using namespace testing_support;

namespace {

SequencePrefix repeat(const std::vector<ModuleElement>& pattern, std::size_t n) {
    std::vector<ModuleElement> terms;
    for (std::size_t i = 0; i < n; ++i) terms.push_back(pattern[i % pattern.size()]);
    return {pattern.front().shape(), std::move(terms), 1.0};
}

}  // namespace

TEST_SUITE("property_h") {
    TEST_CASE("constant sequence: every index, limit x") {
        const ModuleElement x = vec({0.6, cplx(0, 0.8)});
        const SequencePrefix seq = repeat({x}, 20);
        const Subsequence sub = extract_convergent_subsequence(seq, 0.1, 20);
        CHECK(sub.indices.size() == 20);
        CHECK(sub.enough);
        CHECK(gap(sub.limit, x) < 1e-14);
        CHECK(sub.diameter == 0.0);
        CHECK(verify_compactness_transfer(seq, sub.indices, sub.limit, op({{3, 1}, {0, 2}})) < 1e-14);
    }

    TEST_CASE("alternating sequence: one parity") {
        const ModuleElement x = vec({0.6, 0.8});
        const ModuleElement mx = cplx(-1.0) * x;
        const SequencePrefix seq = repeat({x, mx}, 10);
        const Subsequence sub = extract_convergent_subsequence(seq, 0.1, 3);
        REQUIRE(sub.indices.size() >= 3);
        CHECK(std::is_sorted(sub.indices.begin(), sub.indices.end()));
        const std::size_t parity = sub.indices.front() % 2;
        for (std::size_t i : sub.indices) CHECK(i % 2 == parity);
        // bucketing oracle: the chosen terms all equal the first one
        CHECK(gap(sub.limit, seq[sub.indices.front()]) < 1e-14);
    }

    TEST_CASE("decaying sequence (1/n) e_1: a tail near zero") {
        std::vector<ModuleElement> terms;
        for (int n = 1; n <= 64; ++n) terms.push_back(vec({1.0 / n, 0.0}));
        const SequencePrefix seq(scalar_shape(2), terms, 1.0);
        const Subsequence sub = extract_convergent_subsequence(seq, 0.1, 4);
        REQUIRE(sub.indices.size() >= 4);
        CHECK(element_norm(sub.limit) <= 0.1);
        for (std::size_t i : sub.indices) CHECK(element_norm(seq[i]) < 0.1);
        CHECK(sub.diameter <= 0.1);
    }

    TEST_CASE("bounds and arguments are validated") {
        CHECK_THROWS_AS(SequencePrefix(scalar_shape(1), {vec({2.0})}, 1.0), InvalidParameter);
        const SequencePrefix seq = repeat({vec({0.5})}, 4);
        CHECK_THROWS_AS(extract_convergent_subsequence(seq, 0.0, 2), InvalidParameter);
        CHECK_THROWS_AS(extract_convergent_subsequence(seq, 0.1, 5), InvalidParameter);
    }

    TEST_CASE("compactness transfer: zero operator and theta bound") {
        const SequencePrefix seq = clustered_sequence(5, 256);
        const double eps = 0.2;
        const Subsequence sub = extract_convergent_subsequence(seq, eps, 16);
        REQUIRE(sub.enough);
        CHECK(verify_compactness_transfer(seq, sub.indices, sub.limit, ModuleOperator::zero(seq.shape())) == 0.0);
        Rng rng(8);
        const ModuleElement u = random_element(seq.shape(), rng);
        const ModuleElement v = random_element(seq.shape(), rng);
        // ||theta(u,v) z|| = ||u <v,z>|| <= ||u|| ||v|| ||z||
        const double bound = element_norm(u) * element_norm(v) * eps;
        CHECK(verify_compactness_transfer(seq, sub.indices, sub.limit, theta(u, v)) <= bound + 1e-12);
    }

    TEST_CASE("nearest kernel point examples") {
        const ModuleOperator n2 = op({{0, 1}, {0, 0}});
        const NearestPoint a = nearest_kernel_point(n2, vec({3.0, 0.0}));
        CHECK(gap(a.u, vec({3.0, 0.0})) < 1e-14);
        CHECK(a.delta < 1e-14);
        const NearestPoint b = nearest_kernel_point(n2, vec({3.0, 4.0}));
        CHECK(gap(b.u, vec({3.0, 0.0})) < 1e-14);
        CHECK(b.delta == doctest::Approx(4.0));
        const NearestPoint c = nearest_kernel_point(op({{2, 1}, {0, 1}}), vec({3.0, 4.0}));
        CHECK(element_norm(c.u) == 0.0);
        CHECK(c.delta == doctest::Approx(5.0));
    }

    TEST_CASE("property: clusters, probes, Lipschitz transfer, nearest-point minimality") {
        const double eps = 0.2;
        for (std::uint64_t s = 0; s < 20; ++s) {
            const SequencePrefix seq = clustered_sequence(1000 + s, 512);
            CHECK(seq.shape().flat_dimension() <= 8);
            for (const auto& z : seq.elements()) CHECK(element_norm(z) <= 1.0);
            const Subsequence sub = extract_convergent_subsequence(seq, eps, 16);
            CHECK(sub.indices.size() >= 16);
            CHECK(sub.diameter <= eps);
            // independent diameter: pairwise distances over the chosen indices
            double diam = 0.0;
            for (std::size_t a : sub.indices)
                for (std::size_t b : sub.indices) diam = std::max(diam, gap(seq[a], seq[b]));
            CHECK(std::abs(diam - sub.diameter) <= 1e-12);

            Rng rng(derive_seed(7, s));
            for (int t = 0; t < 5; ++t) {
                const ModuleOperator c = random_operator(seq.shape(), rng);
                CHECK(verify_compactness_transfer(seq, sub.indices, sub.limit, c) <=
                      operator_norm(c) * sub.diameter + 1e-10);
            }
            for (int t = 0; t < 6; ++t) {
                const ModuleElement v = random_element(seq.shape(), rng);
                double worst = 0.0;
                for (std::size_t i : sub.indices)
                    worst = std::max(worst, a_norm(inner_product(v, seq[i]) - inner_product(v, sub.limit)));
                CHECK(worst <= element_norm(v) * eps + 1e-10);
            }

            GenSpec ls;
            ls.seed = derive_seed(11, s);
            ls.profile = seq.shape().profile();
            ls.k = seq.shape().k();
            ls.target_r = 1;
            const ModuleOperator l = build_L(gen_compact(ls), 1.0);
            const ModuleElement x = random_element(seq.shape(), rng);
            const NearestPoint np = nearest_kernel_point(l, x);
            const KernelData ker = kernel_generators(l);
            CHECK(element_norm(apply(l, np.u)) <= 1e-8 * element_norm(x));
            for (int t = 0; t < 100; ++t) {
                ModuleElement u = ModuleElement::zero(seq.shape());
                for (const auto& g : ker.generators) u += right_action(g, random_algebra_element(ls.profile, rng));
                CHECK(element_norm(x - u) >= np.delta - 1e-10);
            }
        }
    }
}
