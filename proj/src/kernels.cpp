#include "evlab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "evlab/errors.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define EVLAB_X86 1
#else
#define EVLAB_X86 0
#endif

namespace evlab::kernels {

namespace scalar {

double max_sq_dist(const double* a, const double* b,
                   std::size_t nodes, std::size_t dim,
                   std::size_t stride_a, std::size_t stride_b) {
    double best = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = a[j * stride_a + k] - b[j * stride_b + k];
            s += d * d;
        }
        if (s > best) best = s;
    }
    return best;
}

double max_sq_dist_bounded(const double* a, const double* b,
                           std::size_t nodes, std::size_t dim,
                           std::size_t stride_a, std::size_t stride_b,
                           double cutoff) {
    double best = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = a[j * stride_a + k] - b[j * stride_b + k];
            s += d * d;
        }
        if (s > best) {
            best = s;
            if (best >= cutoff) return best;
        }
    }
    return best;
}

}  // namespace scalar

bool avx2_available() {
#if EVLAB_X86 && defined(EVLAB_HAVE_AVX2_TU)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

Backend pick_default() {
    if (const char* env = std::getenv("EVLAB_KERNELS")) {
        const std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2" && avx2_available()) return Backend::avx2;
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{pick_default()};
    return slot;
}

}  // namespace

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available())
        throw error("avx2 kernels not available on this host");
    backend_slot().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double max_sq_dist(const double* a, const double* b,
                   std::size_t nodes, std::size_t dim,
                   std::size_t stride_a, std::size_t stride_b) {
#if defined(EVLAB_HAVE_AVX2_TU)
    if (active_backend() == Backend::avx2)
        return avx2::max_sq_dist(a, b, nodes, dim, stride_a, stride_b);
#endif
    return scalar::max_sq_dist(a, b, nodes, dim, stride_a, stride_b);
}

double max_sq_dist_bounded(const double* a, const double* b,
                           std::size_t nodes, std::size_t dim,
                           std::size_t stride_a, std::size_t stride_b,
                           double cutoff) {
#if defined(EVLAB_HAVE_AVX2_TU)
    if (active_backend() == Backend::avx2)
        return avx2::max_sq_dist_bounded(a, b, nodes, dim, stride_a, stride_b, cutoff);
#endif
    return scalar::max_sq_dist_bounded(a, b, nodes, dim, stride_a, stride_b, cutoff);
}

}  // namespace evlab::kernels
