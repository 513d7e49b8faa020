#pragma once

#include <span>
#include <string>
#include <vector>

#include "evlab/trajectory.hpp"

// Finite trajectory bundles (the numerical stand-in for a compact set of
// paths) and the Hausdorff distance between them, under either the
// finite-horizon sup metric or the compact-open metric.

namespace evlab {

class Bundle {
public:
    explicit Bundle(std::vector<Trajectory> members, std::string label = "");

    const std::vector<Trajectory>& members() const { return members_; }
    const Trajectory& operator[](std::size_t i) const { return members_[i]; }
    std::size_t size() const { return members_.size(); }

    const TimeGrid& grid() const { return members_.front().grid(); }
    int dim() const { return members_.front().dim(); }

    const std::string& label() const { return label_; }
    void set_label(std::string l) { label_ = std::move(l); }

    // Removes exact duplicates, keeping first occurrences in order.
    Bundle deduped() const;

private:
    std::vector<Trajectory> members_;
    std::string label_;
};

// Hausdorff distance under sup_distance(., ., horizon).
double hausdorff_sup(const Bundle& a, const Bundle& b, int horizon);

// Hausdorff distance under co_metric.
double hausdorff_co(const Bundle& a, const Bundle& b);

// Elementwise truncation to [0, horizon]; coinciding restrictions collapse
// (set semantics), so cardinality may drop.
Bundle restrict_bundle(const Bundle& b, int horizon);

}  // namespace evlab
