#include <cstdlib>
#include <cstring>

#include "polling/kernels.hpp"

namespace polling::kernels {

bool avx2_compiled();

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return avx2_compiled() && __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {
bool use_avx2() {
    const char* env = std::getenv("POLLING_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return false;
    return avx2_available();
}
}  // namespace

RowUpdateFn row_update() {
    return use_avx2() ? &row_update_avx2 : &row_update_scalar;
}

const char* row_update_name() {
    return use_avx2() ? "avx2" : "scalar";
}

}  // namespace polling::kernels
