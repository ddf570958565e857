#include "polling/params.hpp"

#include <cmath>
#include <string>

#include "polling/error.hpp"
#include "polling/hash.hpp"

namespace polling {

SystemParameters::SystemParameters(double lambda, double alpha, BatchSize batch,
                                   ServiceTime service, LocationDensity location)
    : lambda_(lambda),
      alpha_(alpha),
      batch_(std::move(batch)),
      service_(std::move(service)),
      location_(std::move(location)) {
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
        throw Error(ErrorKind::InvalidParameters, "alpha must be positive");
    if (!(lambda_ >= 0.0) || !std::isfinite(lambda_))
        throw Error(ErrorKind::InvalidParameters, "lambda must be nonnegative");
    rho_ = lambda_ * batch_.mean() * service_.mean();
    if (!(rho_ < 1.0))
        throw Error(ErrorKind::Unstable, "rho = " + std::to_string(rho_) + " is not below 1");
}

double SystemParameters::server_density(double y) const {
    return rho_ * location_.pdf(y) + 1.0 - rho_;
}

SystemParameters SystemParameters::with_lambda(double lambda) const {
    return SystemParameters(lambda, alpha_, batch_, service_, location_);
}

SystemParameters SystemParameters::with_rho(double rho) const {
    return with_lambda(rho / (batch_.mean() * service_.mean()));
}

SystemParameters SystemParameters::with_location(LocationDensity location) const {
    return SystemParameters(lambda_, alpha_, batch_, service_, std::move(location));
}

std::uint64_t SystemParameters::fingerprint() const {
    Fnv1a h;
    h.add(lambda_);
    h.add(alpha_);
    h.add(batch_.fingerprint());
    h.add(service_.fingerprint());
    h.add(location_.fingerprint());
    return h.value();
}

}  // namespace polling
