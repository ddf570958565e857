#pragma once

#include <cstddef>

namespace polling::kernels {

// One row of the grid update over columns [lo, hi):
//   out[j] = scale * pi[j] * ((prow[j] + c1) + (d[j] - qrow[j] + t[j])) + brow[j]
// with the t term omitted when t == nullptr. Tracks max |out - old| and max |out - old| * inv_pi.
struct RowArgs {
    const double* prow;
    double c1;
    const double* d;
    const double* qrow;
    const double* t;
    const double* pi;
    const double* inv_pi;
    const double* brow;
    const double* old;
    double* out;
    double scale;
};

struct RowDiff {
    double max_abs = 0.0;
    double max_weighted = 0.0;
};

void row_update_scalar(const RowArgs& a, std::size_t lo, std::size_t hi, RowDiff& diff);
void row_update_avx2(const RowArgs& a, std::size_t lo, std::size_t hi, RowDiff& diff);

using RowUpdateFn = void (*)(const RowArgs&, std::size_t, std::size_t, RowDiff&);

// AVX2 when the CPU supports it and POLLING_SIMD is not "scalar".
RowUpdateFn row_update();
const char* row_update_name();
bool avx2_available();

}  // namespace polling::kernels
