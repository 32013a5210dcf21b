#include "graphvar/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace graphvar::kernels {
namespace {

// Lane bookkeeping for four consecutive rows starting at x.
struct RowBlock {
    __m128i start;
    __m128i degree;
    int max_degree;

    RowBlock(const Adjacency& adj, std::size_t x) {
        const auto* off = reinterpret_cast<const __m128i*>(adj.offsets.data() + x);
        const auto* next = reinterpret_cast<const __m128i*>(adj.offsets.data() + x + 1);
        start = _mm_loadu_si128(off);
        degree = _mm_sub_epi32(_mm_loadu_si128(next), start);
        alignas(16) int d[4];
        _mm_store_si128(reinterpret_cast<__m128i*>(d), degree);
        max_degree = std::max(std::max(d[0], d[1]), std::max(d[2], d[3]));
    }
};

struct LaneGather {
    __m128i neighbor;
    __m256d mask;
    __m256d weight;
};

inline LaneGather gather_step(const Adjacency& adj, const RowBlock& rows, int k) {
    const __m128i kk = _mm_set1_epi32(k);
    const __m128i idx = _mm_add_epi32(rows.start, kk);
    const __m128i active = _mm_cmpgt_epi32(rows.degree, kk);
    LaneGather g;
    g.neighbor = _mm_mask_i32gather_epi32(_mm_setzero_si128(),
                                          reinterpret_cast<const int*>(adj.neighbors.data()), idx, active, 4);
    g.mask = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(active));
    g.weight = _mm256_mask_i32gather_pd(_mm256_setzero_pd(), adj.weights.data(), idx, g.mask, 8);
    return g;
}

inline __m256d gather_values(const double* base, const LaneGather& g) {
    return _mm256_mask_i32gather_pd(_mm256_setzero_pd(), base, g.neighbor, g.mask, 8);
}

void laplacian(const Adjacency& adj, ConstVec mu, ConstVec u, MutVec out) {
    const std::size_t n = adj.vertex_count();
    std::size_t x = 0;
    for (; x + 4 <= n; x += 4) {
        const RowBlock rows(adj, x);
        const __m256d ux = _mm256_loadu_pd(u.data() + x);
        __m256d acc = _mm256_setzero_pd();
        for (int k = 0; k < rows.max_degree; ++k) {
            const LaneGather g = gather_step(adj, rows, k);
            const __m256d uy = gather_values(u.data(), g);
            const __m256d term = _mm256_mul_pd(g.weight, _mm256_sub_pd(uy, ux));
            acc = _mm256_add_pd(acc, _mm256_and_pd(term, g.mask));
        }
        _mm256_storeu_pd(out.data() + x, _mm256_div_pd(acc, _mm256_loadu_pd(mu.data() + x)));
    }
    for (; x < n; ++x) {
        double acc = 0.0;
        for (std::uint32_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
            acc += adj.weights[k] * (u[adj.neighbors[k]] - u[x]);
        }
        out[x] = acc / mu[x];
    }
}

void gamma(const Adjacency& adj, ConstVec mu, ConstVec u, ConstVec v, MutVec out) {
    const std::size_t n = adj.vertex_count();
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t x = 0;
    for (; x + 4 <= n; x += 4) {
        const RowBlock rows(adj, x);
        const __m256d ux = _mm256_loadu_pd(u.data() + x);
        const __m256d vx = _mm256_loadu_pd(v.data() + x);
        __m256d acc = _mm256_setzero_pd();
        for (int k = 0; k < rows.max_degree; ++k) {
            const LaneGather g = gather_step(adj, rows, k);
            const __m256d uy = gather_values(u.data(), g);
            const __m256d vy = gather_values(v.data(), g);
            const __m256d term =
                _mm256_mul_pd(_mm256_mul_pd(g.weight, _mm256_sub_pd(uy, ux)), _mm256_sub_pd(vy, vx));
            acc = _mm256_add_pd(acc, _mm256_and_pd(term, g.mask));
        }
        const __m256d denom = _mm256_mul_pd(two, _mm256_loadu_pd(mu.data() + x));
        _mm256_storeu_pd(out.data() + x, _mm256_div_pd(acc, denom));
    }
    for (; x < n; ++x) {
        double acc = 0.0;
        for (std::uint32_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
            const std::uint32_t y = adj.neighbors[k];
            acc += (adj.weights[k] * (u[y] - u[x])) * (v[y] - v[x]);
        }
        out[x] = acc / (2.0 * mu[x]);
    }
}

void weighted_flux(const Adjacency& adj, ConstVec mu, ConstVec c, ConstVec u, MutVec out) {
    const std::size_t n = adj.vertex_count();
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t x = 0;
    for (; x + 4 <= n; x += 4) {
        const RowBlock rows(adj, x);
        const __m256d ux = _mm256_loadu_pd(u.data() + x);
        const __m256d cx = _mm256_loadu_pd(c.data() + x);
        __m256d acc = _mm256_setzero_pd();
        for (int k = 0; k < rows.max_degree; ++k) {
            const LaneGather g = gather_step(adj, rows, k);
            const __m256d uy = gather_values(u.data(), g);
            const __m256d cy = gather_values(c.data(), g);
            const __m256d term =
                _mm256_mul_pd(_mm256_mul_pd(_mm256_add_pd(cy, cx), g.weight), _mm256_sub_pd(uy, ux));
            acc = _mm256_add_pd(acc, _mm256_and_pd(term, g.mask));
        }
        const __m256d denom = _mm256_mul_pd(two, _mm256_loadu_pd(mu.data() + x));
        _mm256_storeu_pd(out.data() + x, _mm256_div_pd(acc, denom));
    }
    for (; x < n; ++x) {
        double acc = 0.0;
        for (std::uint32_t k = adj.offsets[x]; k < adj.offsets[x + 1]; ++k) {
            const std::uint32_t y = adj.neighbors[k];
            acc += ((c[y] + c[x]) * adj.weights[k]) * (u[y] - u[x]);
        }
        out[x] = acc / (2.0 * mu[x]);
    }
}

inline double combine(__m256d acc) {
    alignas(32) double s[4];
    _mm256_store_pd(s, acc);
    return (s[0] + s[1]) + (s[2] + s[3]);
}

double weighted_sum(ConstVec mu, ConstVec a) {
    const std::size_t n = mu.size();
    const std::size_t body = n - n % 4;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < body; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(mu.data() + i), _mm256_loadu_pd(a.data() + i)));
    }
    double total = combine(acc);
    for (std::size_t i = body; i < n; ++i) total += mu[i] * a[i];
    return total;
}

double weighted_dot(ConstVec mu, ConstVec a, ConstVec b) {
    const std::size_t n = mu.size();
    const std::size_t body = n - n % 4;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < body; i += 4) {
        const __m256d ma = _mm256_mul_pd(_mm256_loadu_pd(mu.data() + i), _mm256_loadu_pd(a.data() + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(ma, _mm256_loadu_pd(b.data() + i)));
    }
    double total = combine(acc);
    for (std::size_t i = body; i < n; ++i) total += (mu[i] * a[i]) * b[i];
    return total;
}

}  // namespace

namespace detail {
const KernelTable& avx2_table_impl() {
    static const KernelTable table{"avx2", &laplacian, &gamma, &weighted_flux, &weighted_sum, &weighted_dot};
    return table;
}
}  // namespace detail

}  // namespace graphvar::kernels
