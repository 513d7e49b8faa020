#include "evlab/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evlab/errors.hpp"

namespace evlab {

namespace {

double node_norm(const Trajectory& x, int k) {
    double s = 0.0;
    for (int j = 0; j < x.dim(); ++j) s += x.at(k, j) * x.at(k, j);
    return std::sqrt(s);
}

}  // namespace

CostFunctional CostFunctional::min_norm_over(int horizon, double cap) {
    if (horizon < 1) throw std::invalid_argument("cost horizon must be >= 1");
    auto fn = [horizon, cap](const Trajectory& x) {
        if (horizon > x.grid().horizon)
            throw incompatible_error("cost horizon exceeds the trajectory grid");
        double best = cap;
        const int last = horizon * x.grid().steps_per_unit;
        for (int k = 0; k <= last; ++k) best = std::min(best, node_norm(x, k));
        return best;
    };
    return CostFunctional(fn, true, "min_norm[0," + std::to_string(horizon) + "]");
}

CostFunctional CostFunctional::terminal_norm(int at) {
    if (at < 0) throw std::invalid_argument("terminal time must be >= 0");
    auto fn = [at](const Trajectory& x) {
        if (at > x.grid().horizon)
            throw incompatible_error("terminal time exceeds the trajectory grid");
        return node_norm(x, at * x.grid().steps_per_unit);
    };
    return CostFunctional(fn, true, "terminal_norm@" + std::to_string(at));
}

CostFunctional CostFunctional::weighted_norm(int horizon) {
    if (horizon < 1) throw std::invalid_argument("cost horizon must be >= 1");
    auto fn = [horizon](const Trajectory& x) {
        if (horizon > x.grid().horizon)
            throw incompatible_error("cost horizon exceeds the trajectory grid");
        const int m = x.grid().steps_per_unit;
        double running = 0.0, total = 0.0;
        for (int n = 1; n <= horizon; ++n) {
            for (int k = (n - 1) * m + (n == 1 ? 0 : 1); k <= n * m; ++k)
                running = std::max(running, node_norm(x, k));
            total += std::ldexp(std::min(1.0, running), -n);
        }
        return total;
    };
    return CostFunctional(fn, true, "weighted_norm[" + std::to_string(horizon) + "]");
}

CostFunctional CostFunctional::custom(std::function<double(const Trajectory&)> fn,
                                      bool declared_continuous, std::string name) {
    if (!fn) throw std::invalid_argument("custom cost needs a function");
    return CostFunctional(std::move(fn), declared_continuous, std::move(name));
}

double CostFunctional::operator()(const Trajectory& x) const { return fn_(x); }

CostFunctional CostFunctional::scaled(double factor) const {
    if (!(factor > 0)) throw std::invalid_argument("scale factor must be positive");
    auto base = fn_;
    return CostFunctional([base, factor](const Trajectory& x) { return factor * base(x); },
                          continuous_, name_ + "*" + std::to_string(factor));
}

BundleEval inf_over_bundle(const CostFunctional& c, const Bundle& phi) {
    BundleEval best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < phi.size(); ++i) {
        double v;
        try {
            v = c(phi[i]);
        } catch (const incompatible_error&) {
            throw;
        } catch (const std::exception& e) {
            throw error("cost evaluation failed on member " + std::to_string(i) +
                        (phi.label().empty() ? "" : " of " + phi.label()) + ": " + e.what());
        }
        if (v < best.value) {
            best.value = v;
            best.argmin = i;
        }
    }
    return best;
}

GameValue maximin(std::span<const Bundle> family, const CostFunctional& c) {
    if (family.empty()) throw std::invalid_argument("maximin over an empty family");
    GameValue out;
    out.value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto eval = inf_over_bundle(c, family[i]);
        if (eval.value > out.value) {
            out.value = eval.value;
            out.bundle_index = i;
            out.trajectory_index = eval.argmin;
            out.bundle_label = family[i].label();
        }
    }
    out.attained = true;
    return out;
}

ExtendedValue extended_maximin(const BundleFamily& f, const CostFunctional& c,
                               const ClosureParams& params) {
    if (!c.declared_continuous())
        throw std::invalid_argument("extension needs a declared-continuous cost");
    ExtendedValue out;
    out.closure = closure_family(f, params);
    const auto closed = out.closure.closed();
    out.value = maximin(closed, c);
    out.value.witness_appended =
        out.value.bundle_index && *out.value.bundle_index >= out.closure.sampled.size();
    return out;
}

ExtensionAgreement extension_agreement(const BundleFamily& f, const CostFunctional& c,
                                       double tol, const ClosureParams& params) {
    ExtensionAgreement rep;
    auto ext = extended_maximin(f, c, params);
    rep.extended = ext.value;
    rep.extended_value = ext.value.value;
    rep.attained = ext.value.attained;

    rep.original = maximin(ext.closure.sampled, c);
    rep.original_value = rep.original.value;
    rep.net_eps = params.net_eps;

    // Empirical modulus of the bundle infimum across adjacent net samples;
    // the honest slack for comparing a sampled supremum with a true max.
    double modulus = 0.0;
    const auto& sampled = ext.closure.sampled;
    for (std::size_t i = 0; i + 1 < sampled.size(); ++i) {
        const double a = inf_over_bundle(c, sampled[i]).value;
        const double b = inf_over_bundle(c, sampled[i + 1]).value;
        modulus = std::max(modulus, std::abs(a - b));
    }
    rep.resolution_bound = modulus;
    rep.gap = std::abs(rep.extended_value - rep.original_value);
    rep.agree = rep.gap <= tol + rep.resolution_bound;
    return rep;
}

}  // namespace evlab
