#include "polling/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "polling/error.hpp"
#include "polling/hash.hpp"

namespace polling {

BatchSize::BatchSize(Kind kind, std::vector<double> probs, double truncated)
    : kind_(kind), probs_(std::move(probs)), truncated_(truncated) {
    cdf_.resize(probs_.size());
    double c = 0.0;
    for (std::size_t k = 0; k < probs_.size(); ++k) {
        c += probs_[k];
        cdf_[k] = c;
        const double kk = static_cast<double>(k);
        m1_ += kk * probs_[k];
        m2f_ += kk * (kk - 1.0) * probs_[k];
        kk1_ += kk / (kk + 1.0) * probs_[k];
        ik1_ += probs_[k] / (kk + 1.0);
    }
    cdf_.back() = 1.0;
}

BatchSize BatchSize::deterministic(int k0) {
    if (k0 < 1) throw Error(ErrorKind::InvalidParameters, "batch size must be at least 1");
    std::vector<double> p(static_cast<std::size_t>(k0) + 1, 0.0);
    p[static_cast<std::size_t>(k0)] = 1.0;
    return BatchSize(Kind::Deterministic, std::move(p), 0.0);
}

BatchSize BatchSize::pmf(std::vector<double> p) {
    if (p.empty()) throw Error(ErrorKind::InvalidParameters, "batch pmf is empty");
    double s = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw Error(ErrorKind::InvalidParameters, "batch pmf entries must be nonnegative");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-12)
        throw Error(ErrorKind::InvalidParameters, "batch pmf sums to " + std::to_string(s));
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();
    std::vector<double> probs(p.size() + 1, 0.0);
    std::copy(p.begin(), p.end(), probs.begin() + 1);
    return BatchSize(Kind::Pmf, std::move(probs), 0.0);
}

BatchSize BatchSize::shifted_poisson(double mean) {
    if (!(mean >= 1.0) || !std::isfinite(mean))
        throw Error(ErrorKind::InvalidParameters, "shifted-Poisson mean must be at least 1");
    const double nu = mean - 1.0;
    const int kmax = static_cast<int>(std::ceil(mean + 12.0 * std::sqrt(mean)));
    std::vector<double> probs(static_cast<std::size_t>(kmax) + 1, 0.0);
    auto poisson = [nu](int j) {
        if (nu == 0.0) return j == 0 ? 1.0 : 0.0;
        return std::exp(j * std::log(nu) - nu - std::lgamma(j + 1.0));
    };
    double kept = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        probs[static_cast<std::size_t>(k)] = poisson(k - 1);
        kept += probs[static_cast<std::size_t>(k)];
    }
    double tail = 0.0;
    for (int j = kmax;; ++j) {
        const double t = poisson(j);
        tail += t;
        if (t < 1e-300 || (j > kmax + 10 && t < 1e-25 * tail)) break;
    }
    if (tail >= 1e-10)
        throw Error(ErrorKind::InvalidParameters, "shifted-Poisson truncation mass too large");
    for (double& v : probs) v /= kept;
    return BatchSize(Kind::ShiftedPoisson, std::move(probs), tail);
}

double BatchSize::pgf(double z) const {
    double s = 0.0;
    for (std::size_t k = probs_.size(); k-- > 0;) s = s * z + probs_[k];
    return s;
}

double BatchSize::pgf_d1(double z) const {
    double s = 0.0;
    for (std::size_t k = probs_.size(); k-- > 1;) s = s * z + static_cast<double>(k) * probs_[k];
    return s;
}

double BatchSize::pgf_d2(double z) const {
    double s = 0.0;
    for (std::size_t k = probs_.size(); k-- > 2;) {
        const double kk = static_cast<double>(k);
        s = s * z + kk * (kk - 1.0) * probs_[k];
    }
    return s;
}

double BatchSize::pgf_complement(double u) const {
    const double l = std::log1p(-u);
    double s = 0.0;
    for (std::size_t k = 1; k < probs_.size(); ++k)
        if (probs_[k] != 0.0) s -= probs_[k] * std::expm1(static_cast<double>(k) * l);
    return s;
}

int BatchSize::sample(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
    if (k >= probs_.size()) k = probs_.size() - 1;
    while (k > 1 && probs_[k] == 0.0) --k;
    return static_cast<int>(std::max<std::size_t>(k, 1));
}

std::uint64_t BatchSize::fingerprint() const {
    Fnv1a h;
    for (double p : probs_) h.add(p);
    return h.value();
}

ServiceTime::ServiceTime(Kind kind, double m1, double m2) : kind_(kind), m1_(m1), m2_(m2) {
    const double var = m2 - m1 * m1;
    if (kind == Kind::Moments && var > 1e-12 * m1 * m1) {
        shape_ = m1 * m1 / var;
        scale_ = var / m1;
    }
}

ServiceTime ServiceTime::deterministic(double b) {
    if (!(b > 0.0) || !std::isfinite(b))
        throw Error(ErrorKind::InvalidParameters, "service time must be positive");
    return ServiceTime(Kind::Deterministic, b, b * b);
}

ServiceTime ServiceTime::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw Error(ErrorKind::InvalidParameters, "service rate must be positive");
    return ServiceTime(Kind::Exponential, 1.0 / rate, 2.0 / (rate * rate));
}

ServiceTime ServiceTime::moments(double mean, double second_moment) {
    if (!(mean > 0.0) || !std::isfinite(mean) || !std::isfinite(second_moment))
        throw Error(ErrorKind::InvalidParameters, "service mean must be positive");
    if (second_moment < mean * mean * (1.0 - 1e-12))
        throw Error(ErrorKind::InvalidParameters, "E[B^2] must be at least E[B]^2");
    return ServiceTime(Kind::Moments, mean, std::max(second_moment, mean * mean));
}

double ServiceTime::lst(double omega) const {
    switch (kind_) {
        case Kind::Deterministic: return std::exp(-omega * m1_);
        case Kind::Exponential: return 1.0 / (1.0 + omega * m1_);
        case Kind::Moments:
            if (shape_ == 0.0) return std::exp(-omega * m1_);
            return std::exp(-shape_ * std::log1p(scale_ * omega));
    }
    return 0.0;
}

double ServiceTime::lst_complement(double omega) const {
    switch (kind_) {
        case Kind::Deterministic: return -std::expm1(-omega * m1_);
        case Kind::Exponential: return omega * m1_ / (1.0 + omega * m1_);
        case Kind::Moments:
            if (shape_ == 0.0) return -std::expm1(-omega * m1_);
            return -std::expm1(-shape_ * std::log1p(scale_ * omega));
    }
    return 0.0;
}

namespace {
double gamma_sample(Rng& rng, double shape) {
    if (shape < 1.0) {
        const double g = gamma_sample(rng, shape + 1.0);
        return g * std::pow(1.0 - rng.uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = 1.0 - rng.uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}
}  // namespace

double ServiceTime::sample(Rng& rng) const {
    switch (kind_) {
        case Kind::Deterministic: return m1_;
        case Kind::Exponential: return rng.exponential(1.0 / m1_);
        case Kind::Moments:
            if (shape_ == 0.0) return m1_;
            return scale_ * gamma_sample(rng, shape_);
    }
    return m1_;
}

std::uint64_t ServiceTime::fingerprint() const {
    Fnv1a h;
    h.add(static_cast<std::uint64_t>(kind_));
    h.add(m1_);
    h.add(m2_);
    return h.value();
}

}  // namespace polling
