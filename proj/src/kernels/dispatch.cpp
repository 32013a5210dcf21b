#include <cstdlib>
#include <string_view>

#include "graphvar/kernels.hpp"

namespace graphvar::kernels {

#if defined(GRAPHVAR_ENABLE_AVX2)
namespace detail {
const KernelTable& avx2_table_impl();
}
#endif

const KernelTable* avx2_table() {
#if defined(GRAPHVAR_ENABLE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &detail::avx2_table_impl() : nullptr;
#else
    return nullptr;
#endif
}

namespace {
const KernelTable& select_table() {
    const char* forced = std::getenv("GRAPHVAR_KERNEL");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
    if (const KernelTable* simd = avx2_table()) return *simd;
    return scalar_table();
}
}  // namespace

const KernelTable& active() {
    static const KernelTable& table = select_table();
    return table;
}

}  // namespace graphvar::kernels
