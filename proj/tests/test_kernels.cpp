#include <doctest.h>

#include <limits>
#include <random>
#include <vector>

#include "evlab/kernels.hpp"

using namespace evlab;

namespace {

std::vector<double> random_soa(std::mt19937_64& rng, std::size_t dim, std::size_t stride) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> v(dim * stride);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar kernel matches a plain loop") {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t dim = 1 + rep % 4;
        const std::size_t nodes = 1 + static_cast<std::size_t>(rep) * 7;
        const auto a = random_soa(rng, dim, nodes);
        const auto b = random_soa(rng, dim, nodes);

        double expect = 0.0;
        for (std::size_t k = 0; k < nodes; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                const double d = a[j * nodes + k] - b[j * nodes + k];
                s += d * d;
            }
            expect = std::max(expect, s);
        }
        CHECK(kernels::scalar::max_sq_dist(a.data(), b.data(), nodes, dim, nodes, nodes)
              == expect);
    }
}

#if defined(EVLAB_HAVE_AVX2_TU)
TEST_CASE("avx2 kernel is bit-identical to the scalar reference") {
    if (!kernels::avx2_available()) return;
    std::mt19937_64 rng(2);
    // Odd node counts exercise the scalar tail after the 4-wide blocks.
    for (std::size_t dim : {1u, 2u, 3u, 5u}) {
        for (std::size_t nodes : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 63u, 64u, 65u, 513u}) {
            const auto a = random_soa(rng, dim, nodes);
            const auto b = random_soa(rng, dim, nodes);
            const double s = kernels::scalar::max_sq_dist(a.data(), b.data(), nodes, dim,
                                                          nodes, nodes);
            const double v = kernels::avx2::max_sq_dist(a.data(), b.data(), nodes, dim,
                                                        nodes, nodes);
            CHECK(s == v);
        }
    }
}

TEST_CASE("bounded kernels agree below the cutoff") {
    if (!kernels::avx2_available()) return;
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t dim = 1 + rep % 3;
        const std::size_t nodes = 5 + static_cast<std::size_t>(rep);
        const auto a = random_soa(rng, dim, nodes);
        const auto b = random_soa(rng, dim, nodes);
        const double exact = kernels::scalar::max_sq_dist(a.data(), b.data(), nodes, dim,
                                                          nodes, nodes);
        for (double cutoff : {0.5 * exact, exact, 2.0 * exact,
                              std::numeric_limits<double>::infinity()}) {
            const double s = kernels::scalar::max_sq_dist_bounded(a.data(), b.data(), nodes,
                                                                  dim, nodes, nodes, cutoff);
            const double v = kernels::avx2::max_sq_dist_bounded(a.data(), b.data(), nodes,
                                                                dim, nodes, nodes, cutoff);
            // Both must tell the same story: exact below the cutoff,
            // saturated at or above it otherwise.
            if (exact < cutoff) {
                CHECK(s == exact);
                CHECK(v == exact);
            } else {
                CHECK(s >= cutoff);
                CHECK(v >= cutoff);
            }
        }
    }
}
#endif

TEST_CASE("backend can be forced and restored") {
    const auto original = kernels::active_backend();
    kernels::force_backend(kernels::Backend::scalar);
    CHECK(kernels::active_backend() == kernels::Backend::scalar);
    if (kernels::avx2_available()) {
        kernels::force_backend(kernels::Backend::avx2);
        CHECK(kernels::active_backend() == kernels::Backend::avx2);
    }
    kernels::force_backend(original);
}
