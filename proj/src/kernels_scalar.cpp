#include <algorithm>
#include <cmath>

#include "polling/kernels.hpp"

namespace polling::kernels {

void row_update_scalar(const RowArgs& a, std::size_t lo, std::size_t hi, RowDiff& diff) {
    double m0 = diff.max_abs, m1 = diff.max_weighted;
    for (std::size_t j = lo; j < hi; ++j) {
        const double s1 = a.prow[j] + a.c1;
        double s2 = a.d[j] - a.qrow[j];
        if (a.t) s2 = s2 + a.t[j];
        const double v = (a.scale * a.pi[j]) * (s1 + s2) + a.brow[j];
        const double e = std::fabs(v - a.old[j]);
        a.out[j] = v;
        m0 = std::max(m0, e);
        m1 = std::max(m1, e * a.inv_pi[j]);
    }
    diff.max_abs = m0;
    diff.max_weighted = m1;
}

}  // namespace polling::kernels
