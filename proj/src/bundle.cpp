#include "evlab/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ranges>

#include "evlab/errors.hpp"
#include "evlab/kernels.hpp"

namespace evlab {

Bundle::Bundle(std::vector<Trajectory> members, std::string label)
    : members_(std::move(members)), label_(std::move(label)) {
    if (members_.empty()) throw std::invalid_argument("bundle must be nonempty");
    for (const auto& m : members_) {
        if (!(m.grid() == members_.front().grid()) || m.dim() != members_.front().dim())
            throw incompatible_error("bundle members must share grid and dimension");
    }
}

Bundle Bundle::deduped() const {
    std::vector<std::size_t> order(members_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) {
        return std::span<const double>(members_[i].data(),
                                       members_[i].stride() * members_[i].dim());
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const auto a = key(i), b = key(j);
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    // Equal members are adjacent after sorting; keep the earliest of each run.
    std::vector<bool> keep(members_.size(), true);
    std::size_t r = 0;
    while (r < order.size()) {
        std::size_t end = r + 1;
        const auto ref = key(order[r]);
        while (end < order.size() &&
               std::ranges::equal(ref, key(order[end]))) ++end;
        const std::size_t keeper = *std::min_element(order.begin() + r, order.begin() + end);
        for (std::size_t q = r; q < end; ++q)
            if (order[q] != keeper) keep[order[q]] = false;
        r = end;
    }
    std::vector<Trajectory> out;
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (keep[i]) out.push_back(members_[i]);
    return Bundle(std::move(out), label_);
}

namespace {

void require_compatible(const Bundle& a, const Bundle& b) {
    if (!a.grid().same_step(b.grid()) || a.dim() != b.dim())
        throw incompatible_error("bundles use different grid steps or dimensions");
}

// max over members of `from` of the min distance into `to`, in squared
// sup-at-horizon distance. Classic two-level pruning: a pair evaluation
// aborts once it exceeds the current min, a member aborts once its min
// cannot raise the running max.
double directed_sup_sq(const Bundle& from, const Bundle& to, std::size_t nodes) {
    const auto dim = static_cast<std::size_t>(from.dim());
    double best = 0.0;
    for (const auto& a : from.members()) {
        double closest = std::numeric_limits<double>::infinity();
        for (const auto& b : to.members()) {
            const double d = kernels::max_sq_dist_bounded(
                a.data(), b.data(), nodes, dim, a.stride(), b.stride(), closest);
            if (d < closest) closest = d;
            if (closest <= best) break;
        }
        if (closest > best) best = closest;
    }
    return best;
}

double directed_co(const Bundle& from, const Bundle& to) {
    double best = 0.0;
    for (const auto& a : from.members()) {
        double closest = std::numeric_limits<double>::infinity();
        for (const auto& b : to.members()) {
            closest = std::min(closest, co_metric(a, b));
            if (closest <= best) break;
        }
        if (closest > best) best = closest;
    }
    return best;
}

}  // namespace

double hausdorff_sup(const Bundle& a, const Bundle& b, int horizon) {
    require_compatible(a, b);
    if (horizon < 1 ||
        horizon > std::min(a.grid().horizon, b.grid().horizon))
        throw std::invalid_argument("hausdorff horizon outside both grids");
    const std::size_t nodes =
        static_cast<std::size_t>(horizon) * a.grid().steps_per_unit + 1;
    return std::sqrt(std::max(directed_sup_sq(a, b, nodes), directed_sup_sq(b, a, nodes)));
}

double hausdorff_co(const Bundle& a, const Bundle& b) {
    require_compatible(a, b);
    return std::max(directed_co(a, b), directed_co(b, a));
}

Bundle restrict_bundle(const Bundle& b, int horizon) {
    std::vector<Trajectory> members;
    members.reserve(b.size());
    for (const auto& m : b.members()) members.push_back(restrict_to(m, horizon));
    return Bundle(std::move(members), b.label()).deduped();
}

}  // namespace evlab
