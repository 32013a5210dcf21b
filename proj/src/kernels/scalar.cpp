#include "graphvar/kernels.hpp"

#include "reduction.hpp"

namespace graphvar::kernels {
namespace {

void laplacian(const Adjacency& adj, ConstVec mu, ConstVec u, MutVec out) {
    const std::size_t n = adj.vertex_count();
    for (std::size_t x = 0; x < n; ++x) {
        double acc = 0.0;
        const double ux = u[x];
        for (std::uint32_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
            acc += adj.weights[k] * (u[adj.neighbors[k]] - ux);
        }
        out[x] = acc / mu[x];
    }
}

void gamma(const Adjacency& adj, ConstVec mu, ConstVec u, ConstVec v, MutVec out) {
    const std::size_t n = adj.vertex_count();
    for (std::size_t x = 0; x < n; ++x) {
        double acc = 0.0;
        const double ux = u[x];
        const double vx = v[x];
        for (std::uint32_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
            const std::uint32_t y = adj.neighbors[k];
            acc += (adj.weights[k] * (u[y] - ux)) * (v[y] - vx);
        }
        out[x] = acc / (2.0 * mu[x]);
    }
}

void weighted_flux(const Adjacency& adj, ConstVec mu, ConstVec c, ConstVec u, MutVec out) {
    const std::size_t n = adj.vertex_count();
    for (std::size_t x = 0; x < n; ++x) {
        double acc = 0.0;
        const double ux = u[x];
        const double cx = c[x];
        for (std::uint32_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
            const std::uint32_t y = adj.neighbors[k];
            acc += ((c[y] + cx) * adj.weights[k]) * (u[y] - ux);
        }
        out[x] = acc / (2.0 * mu[x]);
    }
}

double weighted_sum(ConstVec mu, ConstVec a) {
    return detail::interleaved_sum(mu.size(), [&](std::size_t i) { return mu[i] * a[i]; });
}

double weighted_dot(ConstVec mu, ConstVec a, ConstVec b) {
    return detail::interleaved_sum(mu.size(), [&](std::size_t i) { return (mu[i] * a[i]) * b[i]; });
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar", &laplacian, &gamma, &weighted_flux, &weighted_sum, &weighted_dot};
    return table;
}

}  // namespace graphvar::kernels
