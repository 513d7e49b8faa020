#include "evlab/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evlab/errors.hpp"
#include "evlab/numfmt.hpp"

namespace evlab {

BundleFamily::BundleFamily(std::vector<Bundle> bundles) : rep_(std::move(bundles)) {
    if (this->bundles().empty())
        throw std::invalid_argument("explicit family must be nonempty");
}

BundleFamily::BundleFamily(ParameterizedFamily p) : rep_(std::move(p)) {
    const auto& pf = parameterized();
    if (pf.box.empty()) throw std::invalid_argument("parameter box must have an axis");
    for (const auto& ax : pf.box)
        if (!(ax.hi > ax.lo)) throw std::invalid_argument("parameter box must be nondegenerate");
    if (!pf.generator) throw std::invalid_argument("parameterized family needs a generator");
}

std::vector<Bundle> ClosureReport::closed() const {
    std::vector<Bundle> all = sampled;
    all.insert(all.end(), appended.begin(), appended.end());
    return all;
}

namespace {

std::string param_string(std::span<const double> p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += format_number(p[i]);
    }
    return s + ")";
}

Bundle call_generator(const ParameterizedFamily& pf, std::span<const double> p) {
    try {
        Bundle b = pf.generator(p);
        if (b.label().empty()) b.set_label("theta=" + param_string(p));
        return b;
    } catch (const std::exception& e) {
        throw error("generator failed at " + param_string(p) + ": " + e.what());
    }
}

double aitken(double a0, double a1, double a2) {
    const double d1 = a1 - a0;
    const double d2 = a2 - a1;
    const double dd = d2 - d1;
    // Second differences at rounding-noise level cannot be extrapolated;
    // anything clearly above noise can.
    const double scale = std::abs(a0) + std::abs(a1) + std::abs(a2);
    const double noise = 1e3 * std::numeric_limits<double>::epsilon() * scale + 1e-300;
    if (std::abs(dd) <= noise) return a2;
    const double lim = a2 - d2 * d2 / dd;
    // Non-geometric tails can fling the extrapolation far away; fall back
    // to the last value when the correction dwarfs the observed steps.
    if (std::abs(lim - a2) > 8.0 * (std::abs(d1) + std::abs(d2))) return a2;
    return lim;
}

const Trajectory& nearest_member(const Bundle& b, const Trajectory& x) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = co_metric(b[i], x);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return b[best];
}

}  // namespace

LimitResult limit_bundle(std::span<const Bundle> seq, double tol) {
    if (seq.empty()) throw std::invalid_argument("limit of an empty bundle sequence");
    LimitResult res;
    for (std::size_t i = 1; i < seq.size(); ++i)
        res.consecutive.push_back(hausdorff_co(seq[i - 1], seq[i]));

    if (seq.size() == 1) {
        res.limit = seq.front();
        return res;
    }

    // Convergence: the last few steps do not grow and the final one is
    // below tol. An exactly constant tail converges as well.
    const std::size_t tail = std::min<std::size_t>(4, res.consecutive.size());
    bool monotone = true;
    for (std::size_t i = res.consecutive.size() - tail + 1; i < res.consecutive.size(); ++i)
        if (res.consecutive[i] > res.consecutive[i - 1] * (1.0 + 1e-9) + 1e-15)
            monotone = false;
    if (!monotone || !(res.consecutive.back() < tol)) return res;  // divergence

    if (seq.size() == 2) {
        res.limit = seq.back();
        return res;
    }

    const Bundle& b2 = seq[seq.size() - 1];
    const Bundle& b1 = seq[seq.size() - 2];
    const Bundle& b0 = seq[seq.size() - 3];
    std::vector<Trajectory> members;
    members.reserve(b2.size());
    for (const auto& x2 : b2.members()) {
        const Trajectory& x1 = nearest_member(b1, x2);
        const Trajectory& x0 = nearest_member(b0, x1);
        Trajectory lim(x2.grid(), x2.dim());
        for (int j = 0; j < x2.dim(); ++j)
            for (int k = 0; k < x2.nodes(); ++k)
                lim.at(k, j) = aitken(x0.at(k, j), x1.at(k, j), x2.at(k, j));
        members.push_back(std::move(lim));
    }
    res.limit = Bundle(std::move(members), "limit").deduped();
    return res;
}

namespace {

// Inset net: cell centers of a partition with spacing <= net_eps.
std::vector<std::vector<double>> inset_net(const std::vector<Interval>& box, double net_eps) {
    std::vector<int> counts;
    long long total = 1;
    for (const auto& ax : box) {
        const int c = std::max(1, static_cast<int>(std::ceil(ax.span() / net_eps)));
        counts.push_back(c);
        total *= c;
        if (total > 200000)
            throw error("parameter net too large; increase net_eps");
    }
    std::vector<std::vector<double>> net;
    net.reserve(static_cast<std::size_t>(total));
    std::vector<int> idx(box.size(), 0);
    for (long long it = 0; it < total; ++it) {
        std::vector<double> p(box.size());
        for (std::size_t a = 0; a < box.size(); ++a)
            p[a] = box[a].lo + (idx[a] + 0.5) * box[a].span() / counts[a];
        net.push_back(std::move(p));
        for (std::size_t a = box.size(); a-- > 0;) {
            if (++idx[a] < counts[a]) break;
            idx[a] = 0;
        }
    }
    return net;
}

}  // namespace

ClosureReport closure_family(const BundleFamily& f, const ClosureParams& params) {
    if (params.net_eps <= 0 || params.cluster_tol <= 0)
        throw std::invalid_argument("closure tolerances must be positive");

    ClosureReport report;
    if (f.is_explicit()) {
        report.sampled = f.bundles();
        report.sampled_at.assign(report.sampled.size(), {});
        const int horizon = report.sampled.front().grid().horizon;
        for (int n = 1; n <= horizon; ++n) report.horizon_gap[n] = 0.0;
        return report;
    }

    const auto& pf = f.parameterized();
    for (auto& p : inset_net(pf.box, params.net_eps)) {
        Bundle b = call_generator(pf, p);
        // Constant stretches of the generator collapse to one sample.
        if (!report.sampled.empty() &&
            report.sampled.back().members() == b.members())
            continue;
        report.sampled.push_back(std::move(b));
        report.sampled_at.push_back(std::move(p));
    }

    // Geometric sequences toward each box face; other axes held at their
    // midpoints. A Cauchy run contributes its extrapolated limit unless the
    // limit is already within cluster_tol of the family.
    for (std::size_t axis = 0; axis < pf.box.size(); ++axis) {
        for (int side = 0; side < 2; ++side) {
            const bool upper = side == 1;
            const double face = upper ? pf.box[axis].hi : pf.box[axis].lo;
            const double dir = upper ? -1.0 : 1.0;

            std::vector<Bundle> seq;
            std::vector<double> base(pf.box.size());
            for (std::size_t a = 0; a < pf.box.size(); ++a)
                base[a] = 0.5 * (pf.box[a].lo + pf.box[a].hi);
            for (int j = 1; j <= params.max_face_steps; ++j) {
                base[axis] = face + dir * std::ldexp(pf.box[axis].span(), -j);
                seq.push_back(call_generator(pf, base));
                // Stop while the final triple still sits well above
                // rounding noise; the extrapolation covers the rest.
                if (seq.size() >= 3 &&
                    hausdorff_co(seq[seq.size() - 2], seq.back()) < 1e-9)
                    break;
            }

            auto lim = limit_bundle(seq, params.cluster_tol);
            FaceRun run;
            run.axis = axis;
            run.upper = upper;
            run.cauchy = lim.limit.has_value();
            run.final_step = lim.consecutive.empty() ? 0.0 : lim.consecutive.back();
            if (lim.limit) {
                double nearest = std::numeric_limits<double>::infinity();
                for (const auto& s : report.sampled)
                    nearest = std::min(nearest, hausdorff_co(*lim.limit, s));
                for (const auto& s : report.appended)
                    nearest = std::min(nearest, hausdorff_co(*lim.limit, s));
                if (nearest > params.cluster_tol) {
                    Bundle b = *lim.limit;
                    b.set_label("limit[axis=" + std::to_string(axis) +
                                (upper ? ",hi]" : ",lo]"));
                    report.appended.push_back(std::move(b));
                    run.appended = true;
                }
            }
            report.runs.push_back(run);
        }
    }

    const int horizon = report.sampled.front().grid().horizon;
    for (int n = 1; n <= horizon; ++n) {
        double gap = 0.0;
        for (const auto& a : report.appended) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& s : report.sampled)
                nearest = std::min(nearest, hausdorff_sup(a, s, n));
            gap = std::max(gap, nearest);
        }
        report.horizon_gap[n] = gap;
    }
    return report;
}

MembershipResult member_of_extension(const Bundle& phi, const BundleFamily& f,
                                     std::span<const int> horizons, double tol,
                                     const ClosureParams& params) {
    if (horizons.empty()) throw std::invalid_argument("membership needs at least one horizon");
    const auto closure = closure_family(f, params);
    const auto closed = closure.closed();

    MembershipResult res;
    res.member = true;
    for (int n : horizons) {
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& psi : closed) gap = std::min(gap, hausdorff_sup(phi, psi, n));
        res.gaps[n] = gap;
        if (!(gap <= tol)) res.member = false;
    }
    return res;
}

}  // namespace evlab
