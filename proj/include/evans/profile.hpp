#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "evans/types.hpp"

namespace evans {

struct PhysicalParams {
    double k = 0.0;  // wavenumber [1/m]
    double L0 = 0.0; // conduction length [m]
    double Va = 0.0; // ablation velocity [m/s]
    double g = 0.0;  // gravity [m/s^2]
};

struct DimensionlessParams {
    double eps = 0.0; // k L0
    double Fr = 0.0;  // Va^2 / (g L0)
    double alpha = 0.0;
    double beta = 0.0;
};

DimensionlessParams params_from_physical(const PhysicalParams& phys);

// Pieces of the implicit profile relation
//   y - y* = -sum_{p<=n'} xi^{p-nu}/(nu-p) + H(xi).
// Non-integer nu: n' = floor(nu), H = int_0^xi eta^{-theta}/(1-eta), theta = nu - n'.
// Integer nu: n' = nu - 1, H = ln xi - ln(1 - xi).
double profile_h(const ModelParams& model, double xi);
double profile_ystar(const ModelParams& model);
double implicit_residual(const ModelParams& model, double y, double xi);

// lim (1 - xi) e^y from the implicit relation.
double c0_analytic(const ModelParams& model);

// Left tail xi = t g(t), t = (-1/(nu y))^{1/nu}, g from the fixed point.
double xi_left_tail(const ModelParams& model, double y, int* iterations = nullptr);

// Root of the implicit relation at fixed y (bracketed, used as oracle).
double xi_from_relation(const ModelParams& model, double y);

struct ProfileSample {
    double y;
    double log_xi;  // ln xi
    double log_s;   // ln(1 - xi)
};

class ProfileTable {
public:
    double nu = 2.5;
    double tol = 1e-12;
    double y_min = 0.0;
    double y_max = 0.0;
    double c0 = 0.0;     // (1 - xi) e^y at y_max
    double ystar = 0.0;  // relation constant fixed by the anchor
    double xistar = 0.0; // xi(0)
    std::vector<ProfileSample> samples;

    ModelParams model() const { return {nu}; }

    double xi(double y) const;
    double one_minus_xi(double y) const;
    // -nu y xi^nu - 1, accurate in the left tail where it is small.
    double tail_excess(double y) const;
    double dxi_dy(double y) const;

    nlohmann::json to_json() const;
    static ProfileTable from_json(const nlohmann::json& j);

private:
    // ln xi and ln(1 - xi) with Hermite interpolation inside the table.
    void interp(double y, double& log_xi, double& log_s) const;
};

ProfileTable build_profile(const ModelParams& model, double y_min, double y_max,
                           double tol = 1e-12);

// Default table covering the overdense start and the left switchover xi = 0.02.
ProfileTable build_default_profile(const ModelParams& model);

void save_profile(const ProfileTable& table, const std::string& path);
ProfileTable load_profile(const std::string& path);

struct FuchsCoords {
    double t = 0.0;
    double eta = 0.0; // xi(-t/(alpha beta)) / alpha^{1/nu}
    cplx p{0.0};      // (gamma/beta) xi
    cplx psi0{0.0};   // int_{t0}^t p(s) ds
    double zeta = 0.0; // alpha / xi^nu
};

FuchsCoords fuchs_coords(const ProfileTable& table, double t, const ModeParams& mode,
                         double t0 = 0.5);

// int_0^{t} xi(-s/(alpha beta)) ds.
double xi_integral(const ProfileTable& table, double t, double alpha, double beta);

} // namespace evans
