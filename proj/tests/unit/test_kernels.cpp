#include <gtest/gtest.h>

#include <cstring>
#include <vector>

#include "graphvar/kernels.hpp"
#include "test_util.hpp"

namespace graphvar {
namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

TEST(Kernels, SimdMatchesScalarBitForBit) {
    const auto* simd = kernels::avx2_table();
    if (simd == nullptr) GTEST_SKIP() << "no AVX2 kernels on this machine";
    const auto& ref = kernels::scalar_table();
    CounterRng rng(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = trial % 10 == 0 ? lattice_ball(1 + trial % 4) : testing::random_graph(rng, 23);
        const std::size_t n = g.size();
        const auto adj = g.adjacency();
        const auto u = testing::random_function(rng, n, -5, 5);
        const auto v = testing::random_function(rng, n, -5, 5);
        const auto c = testing::random_function(rng, n, 0, 3);
        std::vector<double> a(n), b(n);
        ref.laplacian(adj, g.mu(), u.values(), a);
        simd->laplacian(adj, g.mu(), u.values(), b);
        EXPECT_TRUE(same_bits(a, b));
        ref.gamma(adj, g.mu(), u.values(), v.values(), a);
        simd->gamma(adj, g.mu(), u.values(), v.values(), b);
        EXPECT_TRUE(same_bits(a, b));
        ref.weighted_flux(adj, g.mu(), c.values(), u.values(), a);
        simd->weighted_flux(adj, g.mu(), c.values(), u.values(), b);
        EXPECT_TRUE(same_bits(a, b));
        EXPECT_TRUE(same_bits(ref.weighted_sum(g.mu(), u.values()), simd->weighted_sum(g.mu(), u.values())));
        EXPECT_TRUE(same_bits(ref.weighted_dot(g.mu(), u.values(), v.values()),
                              simd->weighted_dot(g.mu(), u.values(), v.values())));
    }
}

TEST(Kernels, ScalarLaplacianMatchesDefinition) {
    const auto g = testing::path2();
    std::vector<double> out(2);
    const std::vector<double> u{0.0, 1.0};
    kernels::scalar_table().laplacian(g.adjacency(), g.mu(), u, out);
    EXPECT_DOUBLE_EQ(out[0], 2.0);
    EXPECT_DOUBLE_EQ(out[1], -2.0);
}

TEST(Kernels, ActiveTableIsNamed) { EXPECT_FALSE(kernels::active().name.empty()); }

}  // namespace
}  // namespace graphvar
