#pragma once

#include <cstddef>

namespace graphvar::kernels::detail {

// Four interleaved partial sums over the largest multiple of four, combined
// pairwise, then the tail in order. The AVX2 reductions reproduce this order.
template <typename Term>
double interleaved_sum(std::size_t n, Term term) {
    const std::size_t body = n - n % 4;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::size_t i = 0; i < body; i += 4) {
        s0 += term(i);
        s1 += term(i + 1);
        s2 += term(i + 2);
        s3 += term(i + 3);
    }
    double total = (s0 + s1) + (s2 + s3);
    for (std::size_t i = body; i < n; ++i) total += term(i);
    return total;
}

}  // namespace graphvar::kernels::detail
