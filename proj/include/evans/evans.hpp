#pragma once

#include <utility>
#include <vector>

#include "evans/fuchsian.hpp"
#include "evans/overdense.hpp"
#include "evans/types.hpp"

namespace evans {

class ProfileTable;

enum class BracketVariant {
    Derived, // couplings from the pairing of the two normalized solutions
    Printed, // couplings with the signs of the printed reduced formula
};

struct EvansOptions {
    double t0 = 0.5;        // phase origin and left end of the overlap window
    double t_max = 0.0;     // 0 selects the series-radius window
    int n_points = 3;
    double spread_tol = 1e-6;
    BracketVariant bracket = BracketVariant::Derived;
    OverdenseOptions overdense;
    FuchsOptions fuchs;
};

struct OverlapWindow {
    double t_min = 0.0;
    double t_max = 0.0;
    double r_est = 0.0;    // coefficient-ratio estimate in x = beta zeta
    bool clamped = false;  // t_max raised to 2 t0
};

OverlapWindow overlap_window(const ProfileTable& table, const ModeParams& mode,
                             const ModelParams& model, const EvansOptions& opts = {});

struct EvansBreakdown {
    double t = 0.0, y = 0.0, xi = 0.0;
    Vec4 z = Vec4::Zero();
    Vec6 mhat = Vec6::Zero();
    Vec4 R = Vec4::Zero();
    Vec6 L = Vec6::Zero();
    cplx value{0.0};
};

struct EvansResult {
    cplx value{0.0};
    cplx value_c0{0.0}; // value * c0/(alpha beta)
    std::vector<std::pair<double, double>> eval_points; // (y, t)
    double max_relative_spread = 0.0;
    bool reliable = false;
    OverlapWindow window;
    std::vector<EvansBreakdown> breakdown;
};

// Constant exp((gamma/beta) int_0^{t0} xi(-s/(alpha beta)) ds).
cplx evans_exp_factor(const ProfileTable& table, const ModeParams& mode, double t0);

// Bracketed pairing of (z, mhat) with (R, L) at a common point.
cplx evans_bracket(double xi, const Vec4& z, const Vec6& mhat, const Vec4& R, const Vec6& L,
                   const ModeParams& mode, BracketVariant variant = BracketVariant::Derived);

cplx evans_at(const ProfileTable& table, const ModeParams& mode, const ModelParams& model, double t,
              const EvansOptions& opts = {});

EvansResult evans(const ProfileTable& table, const ModeParams& mode, const ModelParams& model,
                  const EvansOptions& opts = {});

// alpha -> 0 limit assembled from the series and the model solution at t_star.
cplx evans_limit_alpha0(double beta, cplx gamma, const ModelParams& model, double t_star,
                        SeriesVariant variant = SeriesVariant::Shifted, FuchsOptions fopts = {});

// Large-t fit of Ev0(t)/(e^{(r+1)t} t^{1/(2nu)} beta (1-xi0)/xi0) ~ K t^{a*}.
struct LargeTFit {
    cplx K{0.0};
    double exponent = 0.0;
    cplx predicted{0.0}; // (r - 1)(-(r + 1)/nu + 1/(nu + 1))
    std::vector<std::pair<double, cplx>> samples;
};
LargeTFit limit_large_t_fit(double beta, cplx gamma, const ModelParams& model,
                            const std::vector<double>& ts, SeriesVariant variant);

} // namespace evans
