#pragma once

// Data-parallel inner loops shared by the operators.
//
// Every kernel exists as a portable scalar reference and, where the CPU
// supports it, an AVX2 variant. The SIMD variants process four vertices per
// vector (one lane per vertex) and walk each lane's neighbour list in the
// same order as the scalar loop, so both produce bit-identical results.
// Reductions use four interleaved partial sums in both variants for the same
// reason.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace graphvar::kernels {

/// Compressed-row adjacency. Row i's neighbours are
/// neighbors[offsets[i] .. offsets[i+1]) with matching weights.
struct Adjacency {
    std::span<const std::uint32_t> offsets;
    std::span<const std::uint32_t> neighbors;
    std::span<const double> weights;

    std::size_t vertex_count() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
};

using ConstVec = std::span<const double>;
using MutVec = std::span<double>;

struct KernelTable {
    std::string_view name;

    /// out[x] = (1/mu[x]) * sum_y w_xy (u[y] - u[x])
    void (*laplacian)(const Adjacency& adj, ConstVec mu, ConstVec u, MutVec out);

    /// out[x] = (1/(2 mu[x])) * sum_y w_xy (u[y] - u[x]) (v[y] - v[x])
    void (*gamma)(const Adjacency& adj, ConstVec mu, ConstVec u, ConstVec v, MutVec out);

    /// out[x] = (1/(2 mu[x])) * sum_y (c[y] + c[x]) w_xy (u[y] - u[x])
    void (*weighted_flux)(const Adjacency& adj, ConstVec mu, ConstVec c, ConstVec u, MutVec out);

    /// sum_x mu[x] a[x]
    double (*weighted_sum)(ConstVec mu, ConstVec a);

    /// sum_x mu[x] a[x] b[x]
    double (*weighted_dot)(ConstVec mu, ConstVec a, ConstVec b);
};

const KernelTable& scalar_table();

/// nullptr when the build or the running CPU lacks AVX2.
const KernelTable* avx2_table();

/// The table used by the library. Chosen once: AVX2 when available, unless
/// the environment variable GRAPHVAR_KERNEL is set to "scalar".
const KernelTable& active();

}  // namespace graphvar::kernels
