#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "evans/profile.hpp"
#include "evans/types.hpp"

namespace evans {

// Piecewise profile: constant xi0 below the front.
struct DiscontinuityConfig {
    double xi0 = 0.5;
    double beta = 0.1;
    double nu = 2.5;
};

void validate(const DiscontinuityConfig& cfg);

// Closed-form Evans polynomial; throws "prefactor-pole" at beta^2 = gamma^2 xi0^2.
cplx evans_poly(const DiscontinuityConfig& cfg, cplx gamma);

// True when gamma sits on the prefactor pole (within rel tolerance).
bool on_prefactor_pole(const DiscontinuityConfig& cfg, cplx gamma, double rel = 1e-12);

double growth_rate_closed(const DiscontinuityConfig& cfg);

// Dimensional form sqrt(g k (rho_a - rho_0)/(rho_a + rho_0)) - k V_blowoff, with
// xi0 = rho_0/rho_a and V_blowoff = Va/xi0.
struct PhysicalGrowth {
    double gamma = 0.0; // sigma / sqrt(g k)
    double sigma = 0.0; // [1/s]
    double v_blowoff = 0.0;
};
PhysicalGrowth growth_rate_physical(double xi0, const PhysicalParams& phys);

// xi0 intervals in (0, 1) where xi0^2 (1 - xi0) > beta^2 (1 + xi0).
std::vector<std::pair<double, double>> positivity_region(double beta);

// Real roots in (0, 1) of the boundary cubic, from the closed form.
std::vector<double> positivity_boundary(double beta);

// The printed cubic xi^3 + (beta^2 - 1) xi + beta^2, exposed for comparison only.
double printed_positivity_cubic(double xi0, double beta);

// Complex Newton on evans_poly from a start point.
std::optional<cplx> poly_root_newton(const DiscontinuityConfig& cfg, cplx start, double tol = 1e-14,
                                     int max_iter = 100);

} // namespace evans
