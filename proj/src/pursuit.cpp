#include "evlab/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "evlab/errors.hpp"

namespace evlab {

TargetSet origin_target() {
    return {[](double, std::span<const double> x) {
                double s = 0.0;
                for (double v : x) s += v * v;
                return std::sqrt(s);
            },
            "T x {0}"};
}

TargetSet empty_target() {
    return {[](double, std::span<const double>) { return 1.0; }, "empty"};
}

TargetSet everything_target() {
    return {[](double, std::span<const double>) { return -1.0; }, "everything"};
}

TargetSet inflate(const TargetSet& m, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("inflation eps must be positive");
    auto base = m.gauge;
    return {[base, eps](double t, std::span<const double> x) { return base(t, x) - eps; },
            m.description + " +" + std::to_string(eps)};
}

namespace {

void check_horizons(std::span<const int> horizons, int grid_horizon) {
    if (horizons.empty()) throw std::invalid_argument("need at least one horizon");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] < 1 || horizons[i] > grid_horizon)
            throw std::invalid_argument("horizon outside the family grid");
        if (i && horizons[i] <= horizons[i - 1])
            throw std::invalid_argument("horizons must be ascending");
    }
}

double gauge_at(const TargetSet& m, const Trajectory& x, int k, std::vector<double>& buf) {
    for (int j = 0; j < x.dim(); ++j) buf[static_cast<std::size_t>(j)] = x.at(k, j);
    return m.gauge(x.grid().time_at(k), buf);
}

// Earliest hitting time over all members of a bundle, looking up to node
// `last`; kNever if the whole bundle avoids. Members cannot improve on the
// current best beyond its node, so the scan shortens as hits are found.
double bundle_min_hit(const Bundle& b, const TargetSet& m, int last) {
    double best = kNever;
    std::vector<double> buf(static_cast<std::size_t>(b.dim()));
    for (const auto& x : b.members()) {
        int stop = last;
        if (best < kNever)
            stop = std::min(stop, static_cast<int>(best * b.grid().steps_per_unit));
        for (int k = 0; k <= stop; ++k) {
            if (gauge_at(m, x, k, buf) <= 0.0) {
                best = x.grid().time_at(k);
                break;
            }
        }
    }
    return best;
}

}  // namespace

double hitting_time(const Trajectory& x, const TargetSet& m, int horizon) {
    if (horizon < 1 || horizon > x.grid().horizon)
        throw std::invalid_argument("hitting horizon outside the grid");
    std::vector<double> buf(static_cast<std::size_t>(x.dim()));
    const int last = horizon * x.grid().steps_per_unit;
    for (int k = 0; k <= last; ++k)
        if (gauge_at(m, x, k, buf) <= 0.0) return x.grid().time_at(k);
    return kNever;
}

double exit_time(const Trajectory& x, const TargetSet& tube) {
    std::vector<double> buf(static_cast<std::size_t>(x.dim()));
    for (int k = 0; k < x.nodes(); ++k)
        if (gauge_at(tube, x, k, buf) > 0.0) return x.grid().time_at(k);
    return kNever;
}

EvasionValues value_cm(std::span<const Bundle> family, const TargetSet& m,
                       std::span<const int> horizons) {
    if (family.empty()) throw std::invalid_argument("evasion value over an empty family");
    check_horizons(horizons, family.front().grid().horizon);
    const int n_max = horizons.back();
    const int last = n_max * family.front().grid().steps_per_unit;

    // Hitting times are monotone in the horizon; one pass at the largest
    // horizon serves every requested one.
    std::vector<double> min_hit;
    min_hit.reserve(family.size());
    for (const auto& b : family) min_hit.push_back(bundle_min_hit(b, m, last));

    EvasionValues out;
    out.infinite_up_to_horizon = true;
    for (int n : horizons) {
        double best = -1.0;
        bool avoiding = false;
        for (double h : min_hit) {
            if (h > n) avoiding = true;  // kNever included
            else best = std::max(best, h);
        }
        out.value[n] = avoiding ? kNever : best;
        if (!avoiding) out.infinite_up_to_horizon = false;
    }
    return out;
}

ExactnessResult exactness(std::span<const Bundle> family, const TargetSet& m,
                          std::span<const int> horizons, double margin) {
    if (family.empty()) throw std::invalid_argument("exactness over an empty family");
    if (margin < 0) throw std::invalid_argument("margin must be >= 0");
    check_horizons(horizons, family.front().grid().horizon);

    ExactnessResult res;
    res.margin = margin;
    res.certified_horizon = horizons.back();
    const int last = res.certified_horizon * family.front().grid().steps_per_unit;

    // Full scan; the witness is the bundle with the largest clearance, the
    // strongest certificate available (ties to the lowest index).
    for (std::size_t i = 0; i < family.size(); ++i) {
        std::vector<double> buf(static_cast<std::size_t>(family[i].dim()));
        double clearance = kNever;
        for (const auto& x : family[i].members()) {
            for (int k = 0; k <= last; ++k) {
                clearance = std::min(clearance, gauge_at(m, x, k, buf));
                if (!(clearance > margin)) break;
            }
            if (!(clearance > margin)) break;
        }
        if (clearance > margin && (!res.exact || clearance > res.witness_clearance)) {
            res.exact = true;
            res.witness = i;
            res.witness_clearance = clearance;
        }
    }
    return res;
}

RobustnessResult robustness(std::span<const Bundle> family, const TargetSet& m,
                            std::span<const double> eps_list, std::span<const int> horizons) {
    if (eps_list.empty()) throw std::invalid_argument("robustness needs an eps list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0)) throw std::invalid_argument("inflations must be positive");
        if (i && !(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("eps list must be descending");
    }
    RobustnessResult res;
    res.certified_horizon = horizons.empty() ? 0 : horizons.back();
    for (double eps : eps_list) {
        const auto values = value_cm(family, inflate(m, eps), horizons);
        res.per_eps[eps] = values.infinite_up_to_horizon;
        if (values.infinite_up_to_horizon && !res.robust) {
            res.robust = true;
            res.witness_eps = eps;
        }
    }
    return res;
}

EvasionReport classify_evasion(std::span<const Bundle> family, const TargetSet& m,
                               std::span<const double> eps_list, std::span<const int> horizons,
                               double margin) {
    EvasionReport rep;
    rep.values = value_cm(family, m, horizons);
    rep.exact = exactness(family, m, horizons, margin);
    rep.robust = robustness(family, m, eps_list, horizons);
    return rep;
}

EquivalenceReport exactness_robustness_check(const BundleFamily& f, const TargetSet& m,
                                             std::span<const double> eps_list,
                                             std::span<const int> horizons,
                                             const ClosureParams& params) {
    if (eps_list.empty()) throw std::invalid_argument("equivalence check needs an eps list");
    EquivalenceReport rep;
    rep.closure = closure_family(f, params);
    rep.margin = *std::min_element(eps_list.begin(), eps_list.end());

    rep.robust = robustness(rep.closure.sampled, m, eps_list, horizons);
    rep.robust_original = rep.robust.robust;

    rep.original_exact = exactness(rep.closure.sampled, m, horizons, 0.0);
    const auto closed = rep.closure.closed();
    rep.extended_exact = exactness(closed, m, horizons, rep.margin);
    rep.exact_extended = rep.extended_exact.exact;

    rep.agree = rep.robust_original == rep.exact_extended;
    return rep;
}

CorollaryChecks corollary_checks(const BundleFamily& f, const TargetSet& m,
                                 std::span<const double> eps_list,
                                 std::span<const int> horizons, double tol,
                                 const ClosureParams& params) {
    if (eps_list.empty()) throw std::invalid_argument("corollary checks need an eps list");
    CorollaryChecks out;
    const auto closure = closure_family(f, params);
    for (const auto& [n, g] : closure.horizon_gap) out.max_gap = std::max(out.max_gap, g);
    out.closure_added_nothing =
        closure.appended.empty() || out.max_gap <= params.cluster_tol;

    const double margin = *std::min_element(eps_list.begin(), eps_list.end());
    out.exact_original = exactness(closure.sampled, m, horizons, margin).exact;
    out.robust_original = robustness(closure.sampled, m, eps_list, horizons).robust;

    out.c1_applicable = out.closure_added_nothing;
    if (out.c1_applicable) out.c1_holds = out.exact_original == out.robust_original;

    // Cofinal variant: every appended limit must still cover some sampled
    // bundle (one-sided Hausdorff within tol).
    if (!closure.appended.empty()) {
        bool all_cover = true;
        for (const auto& a : closure.appended) {
            bool covers = false;
            for (const auto& s : closure.sampled) {
                double worst = 0.0;
                for (const auto& x : s.members()) {
                    double nearest = std::numeric_limits<double>::infinity();
                    for (const auto& y : a.members())
                        nearest = std::min(nearest, co_metric(x, y));
                    worst = std::max(worst, nearest);
                }
                if (worst <= tol) {
                    covers = true;
                    break;
                }
            }
            if (!covers) {
                all_cover = false;
                break;
            }
        }
        out.c2_applicable = all_cover;
        if (all_cover) out.c2_holds = out.exact_original == out.robust_original;
    }
    return out;
}

}  // namespace evlab
