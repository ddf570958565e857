#pragma once

#include <cstdint>

#include "polling/density.hpp"
#include "polling/distributions.hpp"

namespace polling {

class SystemParameters {
public:
    // Throws InvalidParameters for alpha <= 0 or lambda < 0, Unstable for rho >= 1.
    SystemParameters(double lambda, double alpha, BatchSize batch, ServiceTime service,
                     LocationDensity location);

    double lambda() const { return lambda_; }
    double alpha() const { return alpha_; }
    double rho() const { return rho_; }
    const BatchSize& batch() const { return batch_; }
    const ServiceTime& service() const { return service_; }
    const LocationDensity& location() const { return location_; }

    // rho * pi(y) + 1 - rho
    double server_density(double y) const;

    SystemParameters with_lambda(double lambda) const;
    // lambda = rho / (E[K] E[B])
    SystemParameters with_rho(double rho) const;
    SystemParameters with_location(LocationDensity location) const;

    std::uint64_t fingerprint() const;

private:
    double lambda_;
    double alpha_;
    BatchSize batch_;
    ServiceTime service_;
    LocationDensity location_;
    double rho_;
};

}  // namespace polling
