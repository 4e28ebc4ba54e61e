#pragma once

#include <vector>

#include "evans/exterior.hpp"
#include "evans/types.hpp"

namespace evans {

class ProfileTable;

// z-variable system dz/dt = A_F z with t = -alpha beta y.
Mat5 fuchs_z_matrix(double xi, double t, const ModeParams& mode, const ModelParams& model);

// Kernel of the weighted Lambda^3 unknown V = e^{2t + psi0} t^{-1/(2 nu)} U.
Mat10 weighted_kernel(double xi, double t, const ModeParams& mode, const ModelParams& model);
Mat10 model_kernel(double t, const ModelParams& model);

struct FuchsOptions {
    double T_start = 50.0;
    double T_far = 1e8;   // start of the stiff far leg
    double h_far = 0.02;  // Radau step in ln t
    bool far_leg = true;  // false: start at T_start from P(0)
    double rtol = 1e-12;
    double atol = 1e-14;
    double t_floor = 1e-3;
};

struct MinusState {
    double t = 0.0;
    Vec4 R = Vec4::Zero(); // weighted f-perp coefficients
    Vec6 L = Vec6::Zero(); // weighted g-perp coefficients
    bool weighted = true;
    cplx log_weight{0.0};  // 2t + psi0(t) - ln t/(2 nu), relative to phase origin t0

    Wedge3 as_wedge() const;
};

// Amplitude of the adiabatic ray at T: (1 + p)^{-1/2} exp(-int_T^inf kappa1).
cplx far_amplitude(const ProfileTable& table, const ModeParams& mode, const ModelParams& model,
                   double T);

std::vector<MinusState> model_solution(const ModelParams& model, const std::vector<double>& ts,
                                       FuchsOptions opts = {});
MinusState model_solution(const ModelParams& model, double t, FuchsOptions opts = {});

std::vector<MinusState> full_solution(const ProfileTable& table, const ModeParams& mode,
                                      const ModelParams& model, const std::vector<double>& ts,
                                      FuchsOptions opts = {}, double t0 = 0.5);
MinusState rl_at(const ProfileTable& table, const ModeParams& mode, const ModelParams& model,
                 double t, FuchsOptions opts = {}, double t0 = 0.5);

} // namespace evans
