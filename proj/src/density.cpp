#include "polling/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "polling/error.hpp"
#include "polling/hash.hpp"

namespace polling {

double fold(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

double arc_length(double a, double b) {
    return a <= b ? b - a : 1.0 - a + b;
}

LocationDensity::LocationDensity(std::vector<Segment> segs) : segs_(std::move(segs)) {
    for (const auto& s : segs_) breaks_.push_back(s.start);
    breaks_.push_back(1.0);
    cum_.assign(segs_.size() + 1, 0.0);
    for (std::size_t s = 0; s < segs_.size(); ++s)
        cum_[s + 1] = cum_[s] + seg_antider(s, breaks_[s + 1]);
    sup_ = -1.0;
    inf_ = 1e300;
    for (std::size_t s = 0; s < segs_.size(); ++s) {
        double lo, hi;
        seg_extrema(s, breaks_[s], breaks_[s + 1], lo, hi);
        sup_ = std::max(sup_, hi);
        inf_ = std::min(inf_, lo);
    }
}

LocationDensity LocationDensity::uniform() {
    return LocationDensity({Segment{0.0, {1.0, 0.0, 0.0, 0.0}}});
}

LocationDensity LocationDensity::piecewise(std::vector<Segment> segments, bool normalize) {
    if (segments.empty())
        throw Error(ErrorKind::InvalidParameters, "location density needs at least one segment");
    if (segments.front().start != 0.0)
        throw Error(ErrorKind::InvalidParameters, "first breakpoint must be 0");
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const double a = segments[s].start;
        if (!(a >= 0.0 && a < 1.0))
            throw Error(ErrorKind::InvalidParameters, "breakpoints must lie in [0, 1)");
        if (s > 0 && !(a > segments[s - 1].start))
            throw Error(ErrorKind::InvalidParameters, "breakpoints must be strictly increasing");
        for (double c : segments[s].coeffs)
            if (!std::isfinite(c))
                throw Error(ErrorKind::InvalidParameters, "density coefficients must be finite");
    }
    LocationDensity d(std::move(segments));
    if (d.inf_ < -1e-14)
        throw Error(ErrorKind::InvalidParameters, "density must be nonnegative");
    const double total = d.cum_.back();
    if (normalize) {
        if (!(total > 0.0)) throw Error(ErrorKind::InvalidParameters, "density has zero mass");
        std::vector<Segment> scaled = d.segs_;
        for (auto& s : scaled)
            for (double& c : s.coeffs) c /= total;
        return LocationDensity(std::move(scaled));
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(ErrorKind::InvalidParameters,
                    "density integrates to " + std::to_string(total) + ", expected 1");
    return d;
}

LocationDensity LocationDensity::piecewise_uniform(const std::vector<double>& breaks,
                                                   const std::vector<double>& masses) {
    if (breaks.size() != masses.size())
        throw Error(ErrorKind::InvalidParameters, "one mass per piece is required");
    std::vector<Segment> segs;
    for (std::size_t s = 0; s < breaks.size(); ++s) {
        const double end = s + 1 < breaks.size() ? breaks[s + 1] : 1.0;
        if (!(end > breaks[s]))
            throw Error(ErrorKind::InvalidParameters, "breakpoints must be strictly increasing");
        segs.push_back(Segment{breaks[s], {masses[s] / (end - breaks[s]), 0.0, 0.0, 0.0}});
    }
    return piecewise(std::move(segs));
}

LocationDensity LocationDensity::with_floor(double eps) const {
    std::vector<Segment> segs = segs_;
    for (auto& s : segs) {
        s.coeffs[0] += eps;
        for (double& c : s.coeffs) c /= (1.0 + eps);
    }
    return piecewise(std::move(segs), true);
}

std::size_t LocationDensity::segment_of(double x) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end() - 1, x);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - breaks_.begin()) - 1));
}

double LocationDensity::seg_value(std::size_t s, double x) const {
    const auto& c = segs_[s].coeffs;
    return c[0] + x * (c[1] + x * (c[2] + x * c[3]));
}

// Integral of segment s's polynomial from its start to x.
double LocationDensity::seg_antider(std::size_t s, double x) const {
    const auto& c = segs_[s].coeffs;
    auto F = [&](double t) {
        return t * (c[0] + t * (c[1] / 2.0 + t * (c[2] / 3.0 + t * c[3] / 4.0)));
    };
    const double a = breaks_[s];
    if (c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0) return c[0] * (x - a);
    return F(x) - F(a);
}

void LocationDensity::seg_extrema(std::size_t s, double a, double b, double& lo, double& hi) const {
    const auto& c = segs_[s].coeffs;
    lo = std::min(seg_value(s, a), seg_value(s, b));
    hi = std::max(seg_value(s, a), seg_value(s, b));
    // roots of c1 + 2 c2 x + 3 c3 x^2
    double roots[2];
    int nr = 0;
    const double A = 3.0 * c[3], B = 2.0 * c[2], C = c[1];
    if (A != 0.0) {
        const double disc = B * B - 4.0 * A * C;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            roots[nr++] = (-B - sq) / (2.0 * A);
            roots[nr++] = (-B + sq) / (2.0 * A);
        }
    } else if (B != 0.0) {
        roots[nr++] = -C / B;
    }
    for (int k = 0; k < nr; ++k) {
        if (roots[k] > a && roots[k] < b) {
            const double v = seg_value(s, roots[k]);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
}

double LocationDensity::pdf(double x) const {
    x = fold(x);
    return seg_value(segment_of(x), x);
}

double LocationDensity::cdf(double x) const {
    if (x >= 1.0) return 1.0;
    if (x <= 0.0) return 0.0;
    const std::size_t s = segment_of(x);
    return (cum_[s] + seg_antider(s, x)) / cum_.back();
}

double LocationDensity::arc(double a, double b) const {
    a = fold(a);
    b = fold(b);
    if (a <= b) return cdf(b) - cdf(a);
    return 1.0 - cdf(a) + cdf(b);
}

double LocationDensity::arc_full(double a, double b) const {
    a = fold(a);
    b = fold(b);
    if (a == b) return 1.0;
    return arc(a, b);
}

double LocationDensity::sample(double u) const {
    if (u <= 0.0) u = 0.0;
    if (u >= 1.0) u = std::nextafter(1.0, 0.0);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    std::size_t s = static_cast<std::size_t>(it - cum_.begin());
    s = s == 0 ? 0 : s - 1;
    if (s >= segs_.size()) s = segs_.size() - 1;
    // skip zero-mass pieces
    while (s + 1 < segs_.size() && cum_[s + 1] - cum_[s] <= 0.0) ++s;
    const double a = breaks_[s], b = breaks_[s + 1];
    const double target = u - cum_[s];
    const auto& c = segs_[s].coeffs;
    if (c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0) {
        double x = a + target / c[0];
        return std::min(std::max(x, a), std::nextafter(b, a));
    }
    double lo = a, hi = b;
    double x = a + (b - a) * target / std::max(cum_[s + 1] - cum_[s], 1e-300);
    for (int it2 = 0; it2 < 100; ++it2) {
        const double F = seg_antider(s, x) - target;
        if (F > 0.0) hi = x; else lo = x;
        const double f = seg_value(s, x);
        double next = f > 0.0 ? x - F / f : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x)) || hi - lo <= 1e-16) {
            x = next;
            break;
        }
        x = next;
    }
    return std::min(std::max(x, a), std::nextafter(b, a));
}

double LocationDensity::sup_on(double a, double b) const {
    double hi = -1e300;
    for (std::size_t s = 0; s < segs_.size(); ++s) {
        const double lo_s = std::max(a, breaks_[s]), hi_s = std::min(b, breaks_[s + 1]);
        if (lo_s > hi_s || (lo_s == hi_s && lo_s != a)) continue;
        double l, h;
        seg_extrema(s, lo_s, hi_s, l, h);
        hi = std::max(hi, h);
    }
    return hi;
}

double LocationDensity::inf_on(double a, double b) const {
    double lo = 1e300;
    for (std::size_t s = 0; s < segs_.size(); ++s) {
        const double lo_s = std::max(a, breaks_[s]), hi_s = std::min(b, breaks_[s + 1]);
        if (lo_s > hi_s || (lo_s == hi_s && lo_s != a)) continue;
        double l, h;
        seg_extrema(s, lo_s, hi_s, l, h);
        lo = std::min(lo, l);
    }
    return lo;
}

bool LocationDensity::is_uniform() const {
    for (const auto& s : segs_)
        if (s.coeffs[0] != 1.0 || s.coeffs[1] != 0.0 || s.coeffs[2] != 0.0 || s.coeffs[3] != 0.0)
            return false;
    return true;
}

std::uint64_t LocationDensity::fingerprint() const {
    Fnv1a h;
    for (const auto& s : segs_) {
        h.add(s.start);
        for (double c : s.coeffs) h.add(c);
    }
    return h.value();
}

double mixed_arc(const LocationDensity& pi, double rho, double a, double b) {
    return rho * pi.arc(a, b) + (1.0 - rho) * arc_length(fold(a), fold(b));
}

}  // namespace polling
