#pragma once

#include <cstddef>
#include <string_view>

// Low-level numeric kernels behind the trajectory metrics.
//
// Trajectory samples are stored component-major: component j of node k lives
// at data[j * stride + k]. All kernels reduce over the first `nodes` entries
// of each component, so a caller can evaluate a restricted horizon (or a
// segment, by offsetting the pointers) without copying. The two inputs may
// have different strides (different horizons on a shared step).
//
// Each kernel has a scalar reference implementation and an AVX2 variant.
// The AVX2 code uses separate multiply/add (no FMA contraction), so both
// backends produce bit-identical results; the dispatch below picks one at
// startup and can be overridden for testing.

namespace evlab::kernels {

enum class Backend { scalar, avx2 };

// Backend selected at startup (AVX2 when the CPU supports it, unless the
// EVLAB_KERNELS environment variable says "scalar" or "avx2").
Backend active_backend();

// Force a backend; throws evlab::error if it is not available on this CPU.
void force_backend(Backend b);

bool avx2_available();

std::string_view backend_name(Backend b);

// Max over nodes of the squared Euclidean distance between two sampled
// paths with `dim` components each.
double max_sq_dist(const double* a, const double* b,
                   std::size_t nodes, std::size_t dim,
                   std::size_t stride_a, std::size_t stride_b);

// Same reduction, but may give up early: as soon as the running maximum
// reaches `cutoff` the return value is only guaranteed to be >= cutoff.
// Exact below the cutoff. Used by the Hausdorff pair loops for pruning.
double max_sq_dist_bounded(const double* a, const double* b,
                           std::size_t nodes, std::size_t dim,
                           std::size_t stride_a, std::size_t stride_b,
                           double cutoff);

// Reference implementations, always available (the dispatch targets).
namespace scalar {
double max_sq_dist(const double* a, const double* b,
                   std::size_t nodes, std::size_t dim,
                   std::size_t stride_a, std::size_t stride_b);
double max_sq_dist_bounded(const double* a, const double* b,
                           std::size_t nodes, std::size_t dim,
                           std::size_t stride_a, std::size_t stride_b,
                           double cutoff);
}  // namespace scalar

#if defined(EVLAB_HAVE_AVX2_TU)
namespace avx2 {
double max_sq_dist(const double* a, const double* b,
                   std::size_t nodes, std::size_t dim,
                   std::size_t stride_a, std::size_t stride_b);
double max_sq_dist_bounded(const double* a, const double* b,
                           std::size_t nodes, std::size_t dim,
                           std::size_t stride_a, std::size_t stride_b,
                           double cutoff);
}  // namespace avx2
#endif

}  // namespace evlab::kernels
