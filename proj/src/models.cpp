#include "evans/models.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/Polynomials>

namespace evans {

void validate(const DiscontinuityConfig& cfg)
{
    if (!(cfg.xi0 > 0.0 && cfg.xi0 < 1.0)) throw EvansError("validation", "xi0 must lie in (0, 1)");
    if (!(cfg.beta >= 0.0)) throw EvansError("validation", "beta must be >= 0");
    if (!(cfg.nu > 1.0)) throw EvansError("validation", "nu must be > 1");
}

bool on_prefactor_pole(const DiscontinuityConfig& cfg, cplx gamma, double rel)
{
    const double b2 = cfg.beta * cfg.beta;
    const cplx d = b2 - gamma * gamma * cfg.xi0 * cfg.xi0;
    return std::abs(d) <= rel * std::max(1.0, b2);
}

cplx evans_poly(const DiscontinuityConfig& cfg, cplx gamma)
{
    validate(cfg);
    if (on_prefactor_pole(cfg, gamma))
        throw EvansError("prefactor-pole", "beta^2 = gamma^2 xi0^2");
    const double b = cfg.beta, x = cfg.xi0;
    const cplx bm = b - gamma * x, bp = b + gamma * x;
    const cplx bracket = x * x * (1.0 - x) - (1.0 + x) * bp * bp;
    return b * bm * bm * std::pow(x, cfg.nu) / (b * b - gamma * gamma * x * x) * bracket;
}

double growth_rate_closed(const DiscontinuityConfig& cfg)
{
    validate(cfg);
    return std::sqrt((1.0 - cfg.xi0) / (1.0 + cfg.xi0)) - cfg.beta / cfg.xi0;
}

PhysicalGrowth growth_rate_physical(double xi0, const PhysicalParams& phys)
{
    const DimensionlessParams d = params_from_physical(phys);
    PhysicalGrowth g;
    g.gamma = growth_rate_closed({xi0, d.beta, 2.5});
    g.sigma = g.gamma * std::sqrt(phys.g * phys.k);
    g.v_blowoff = phys.Va / xi0;
    return g;
}

std::vector<double> positivity_boundary(double beta)
{
    // xi^3 - xi^2 + beta^2 xi + beta^2 = 0, i.e. xi^2 (1 - xi) = beta^2 (1 + xi).
    Eigen::Vector4d coeffs(beta * beta, beta * beta, -1.0, 1.0);
    Eigen::PolynomialSolver<double, 3> solver(coeffs);
    std::vector<double> roots;
    for (const auto& z : solver.roots())
        if (std::abs(z.imag()) <= 1e-10 * std::max(1.0, std::abs(z)) && z.real() > 0.0 && z.real() < 1.0)
            roots.push_back(z.real());
    std::sort(roots.begin(), roots.end());
    // Polish on the real line.
    for (double& x : roots)
        for (int k = 0; k < 4; ++k) {
            const double f = ((x - 1.0) * x + beta * beta) * x + beta * beta;
            const double df = (3.0 * x - 2.0) * x + beta * beta;
            if (df != 0.0) x -= f / df;
        }
    return roots;
}

std::vector<std::pair<double, double>> positivity_region(double beta)
{
    if (!(beta >= 0.0)) throw EvansError("validation", "beta must be >= 0");
    if (beta == 0.0) return {{0.0, 1.0}};
    const std::vector<double> r = positivity_boundary(beta);
    if (r.size() == 2 && r[1] > r[0]) return {{r[0], r[1]}};
    return {};
}

double printed_positivity_cubic(double xi0, double beta)
{
    return xi0 * xi0 * xi0 + (beta * beta - 1.0) * xi0 + beta * beta;
}

std::optional<cplx> poly_root_newton(const DiscontinuityConfig& cfg, cplx start, double tol, int max_iter)
{
    cplx g = start;
    for (int k = 0; k < max_iter; ++k) {
        const double h = 1e-7 * std::max(1.0, std::abs(g));
        const cplx f = evans_poly(cfg, g);
        const cplx df = (evans_poly(cfg, g + h) - evans_poly(cfg, g - h)) / (2.0 * h);
        if (df == cplx(0.0)) return std::nullopt;
        const cplx step = f / df;
        g -= step;
        if (std::abs(step) <= tol * std::max(1.0, std::abs(g))) return g;
    }
    return std::nullopt;
}

} // namespace evans
