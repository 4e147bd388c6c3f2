#include "hilbmod/property_h.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hilbmod/errors.hpp"

namespace hilbmod {

namespace {

Eigen::VectorXd flatten(const ModuleElement& x) {
    Eigen::Index total = 0;
    for (const auto& b : x.blocks()) total += b.size();
    Eigen::VectorXd v(2 * total);
    Eigen::Index pos = 0;
    for (const auto& b : x.blocks())
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            for (Eigen::Index i = 0; i < b.rows(); ++i) {
                v(pos++) = b(i, j).real();
                v(pos++) = b(i, j).imag();
            }
    return v;
}

ModuleElement centroid(const SequencePrefix& seq, const std::vector<std::size_t>& idx) {
    ModuleElement sum = ModuleElement::zero(seq.shape());
    for (std::size_t i : idx) sum += seq[i];
    return cplx(1.0 / static_cast<double>(idx.size()), 0.0) * sum;
}

}  // namespace

SequencePrefix::SequencePrefix(ModuleShape shape, std::vector<ModuleElement> elements, double bound)
    : shape_(std::move(shape)), elements_(std::move(elements)), bound_(bound) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i].shape() != shape_) throw ShapeError("sequence element " + std::to_string(i) + " has a different shape");
        if (element_norm(elements_[i]) > bound_ + 1e-12)
            throw InvalidParameter("sequence element " + std::to_string(i) + " exceeds the bound " + std::to_string(bound_));
    }
}

Subsequence extract_convergent_subsequence(const SequencePrefix& seq, double eps, std::size_t want) {
    if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
    if (want < 2) throw InvalidParameter("want must be >= 2");
    if (want > seq.size()) throw InvalidParameter("want exceeds the prefix length");

    const int d = seq.shape().flat_dimension();
    const double side = eps / (2.0 * std::sqrt(static_cast<double>(d)));

    std::vector<Eigen::VectorXd> flat;
    flat.reserve(seq.size());
    for (const auto& x : seq.elements()) flat.push_back(flatten(x));

    std::map<std::vector<long long>, std::vector<std::size_t>> cells;
    for (std::size_t n = 0; n < flat.size(); ++n) {
        std::vector<long long> key(static_cast<std::size_t>(flat[n].size()));
        for (Eigen::Index c = 0; c < flat[n].size(); ++c)
            key[static_cast<std::size_t>(c)] = static_cast<long long>(std::floor(flat[n](c) / side));
        cells[key].push_back(n);
    }
    const std::vector<std::size_t>* best = nullptr;
    for (const auto& [key, members] : cells)
        if (best == nullptr || members.size() > best->size()) best = &members;

    Subsequence out{.indices = *best, .limit = ModuleElement::zero(seq.shape())};

    if (out.indices.size() < want) {
        const double radius = eps / 2.0;
        std::vector<std::size_t> ball_best;
        for (std::size_t c = 0; c < flat.size(); ++c) {
            std::vector<std::size_t> ball;
            for (std::size_t n = 0; n < flat.size(); ++n)
                if ((flat[n] - flat[c]).norm() <= radius) ball.push_back(n);
            if (ball.size() > ball_best.size()) ball_best = std::move(ball);
        }
        if (ball_best.size() > out.indices.size()) {
            out.indices = std::move(ball_best);
            out.from_grid = false;
        }
    }

    out.limit = centroid(seq, out.indices);
    for (std::size_t a = 0; a < out.indices.size(); ++a)
        for (std::size_t b = a + 1; b < out.indices.size(); ++b)
            out.diameter = std::max(out.diameter, element_norm(seq[out.indices[a]] - seq[out.indices[b]]));
    out.enough = out.indices.size() >= want;

    const double per_axis = std::ceil(4.0 * seq.bound() * std::sqrt(static_cast<double>(d)) / eps);
    const double log_needed = std::log(static_cast<double>(want - 1)) + 2.0 * d * std::log(std::max(per_axis, 1.0));
    out.guarantee_held = seq.size() > 1 && std::log(static_cast<double>(seq.size() - 1)) >= log_needed;
    return out;
}

double verify_compactness_transfer(const SequencePrefix& seq, const std::vector<std::size_t>& indices,
                                   const ModuleElement& limit, const ModuleOperator& c) {
    const ModuleElement c_limit = apply(c, limit);
    double worst = 0.0;
    for (std::size_t i : indices) {
        if (i >= seq.size()) throw InvalidParameter("index " + std::to_string(i) + " out of range");
        worst = std::max(worst, element_norm(apply(c, seq[i]) - c_limit));
    }
    return worst;
}

NearestPoint nearest_kernel_point(const ModuleOperator& l, const ModuleElement& x, double rank_tol) {
    const KernelData ker = kernel_generators(l, rank_tol);
    ModuleElement u = project_onto(ker.span, x);
    const double delta = element_norm(x - u);
    return {std::move(u), delta};
}

}  // namespace hilbmod
