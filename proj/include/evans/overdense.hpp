#pragma once

#include <array>
#include <vector>

#include "evans/exterior.hpp"
#include "evans/types.hpp"

namespace evans {

class ProfileTable;

// Conjugate S^{-1} B^(2) S with S = diag(1_4, (1 - xi) 1_6); regular at xi = 1.
// s = 1 - xi is passed separately so it keeps full precision near xi = 1.
Mat10 khat_matrix(double xi, double s, const ModeParams& mode);

// Blocks that must vanish for khat_matrix to be regular; used by tests.
struct KhatDefect {
    double c_ff = 0.0, a_gf = 0.0, c_gf = 0.0, c_gg = 0.0;
};
KhatDefect khat_defect(double xi, const ModeParams& mode);

// du/dy = A u for u = (z, mhat), mhat = m/(1 - xi).
Mat10 overdense_matrix(double xi, double s, const ModeParams& mode, const ModelParams& model,
                       cplx mu);

// Taylor coefficients mu_0..mu_k of mu(alpha) at alpha = 0.
std::vector<cplx> mu_series(const ModeParams& mode, int k);

struct OverdenseState {
    double y = 0.0;
    Vec4 z = Vec4::Zero();
    Vec6 m = Vec6::Zero();    // m_p in the original variables
    Vec6 mhat = Vec6::Zero(); // m_p / (1 - xi)

    Wedge2 as_wedge() const;
};

struct OverdenseOptions {
    double y_start = 0.0;      // 0 selects the default (1 - xi = 1e-8)
    bool first_order_start = true;
    double scale = 1.0;        // multiplies the boundary data
    double rtol = 1e-12;
    double atol = 1e-14;
};

double default_y_start(const ProfileTable& table, double s_target = 1e-8);

// Boundary data at +infinity: null vector of A(xi = 1) with z1 = beta.
Vec10 overdense_null_vector(const ModeParams& mode, const ModelParams& model);

// Taylor coefficients in alpha of overdense_null_vector.
std::vector<Vec10> null_vector_series(const ModeParams& mode, int order);

std::vector<OverdenseState> integrate_w2_plus(const ProfileTable& table, const ModeParams& mode,
                                              const ModelParams& model,
                                              const std::vector<double>& y_eval,
                                              OverdenseOptions opts = {});
OverdenseState integrate_w2_plus(const ProfileTable& table, const ModeParams& mode,
                                 const ModelParams& model, double y_eval,
                                 OverdenseOptions opts = {});

// Order-alpha terms: printed closed forms for z, quadrature for m.
struct FirstOrder {
    Vec4 z1 = Vec4::Zero();
    Vec6 m1 = Vec6::Zero();
};
FirstOrder first_order_closed_forms(double xi, const ModeParams& mode, const ModelParams& model);

// Coefficient functions u_j(y) of u = sum alpha^j u_j, by integrating the
// triangular hierarchy. Entry [i][j] is at y_eval[i].
std::vector<std::vector<OverdenseState>> alpha_expansion(const ProfileTable& table,
                                                         const ModeParams& mode,
                                                         const ModelParams& model, int order,
                                                         const std::vector<double>& y_eval,
                                                         double y_start = 30.0);

enum class SeriesVariant {
    Printed, // recurrence exactly as printed (line-6 slip fixed)
    Shifted, // with the mu(0) = -beta - gamma weight carried into every line
};

struct SeriesCoeffs {
    int J = 0;
    std::vector<std::array<cplx, 4>> A; // A[j-1][p-1]
    std::vector<std::array<cplx, 6>> B; // B[j-1][q-1]
    static constexpr std::array<int, 4> deltas{0, 1, 1, 1};
    static constexpr std::array<int, 6> ds{1, 1, 1, 2, 2, 2};

    double norm(int j) const; // sum |A_{p,j}| + sum |B_{q,j}|
};

SeriesCoeffs recurrence_coeffs(cplx r, const ModelParams& model, int J,
                               SeriesVariant variant = SeriesVariant::Printed);

// Sums x^j (A_j, B_j) at x = beta zeta until terms drop below tol.
Vec10 abar_bbar(cplx zeta, double beta, cplx r, const ModelParams& model, double tol = 1e-16,
                SeriesVariant variant = SeriesVariant::Printed);

// Same quantity from the reduced ODE driven by the source F0, integrated
// from x = 0 in the scaled unknowns xi^delta H, with xi^{-nu} = x.
Vec10 lemma_ode_route(double x, cplx r, const ModelParams& model,
                      SeriesVariant variant = SeriesVariant::Printed);

// Reduced matrix B0(xi, r) of the limit system.
Mat5 b0_matrix(double xi, cplx r);

// Fitted ratio bound R_est = max_j ||c_{j+1}|| / ||c_j|| over early j.
double series_radius_estimate(const SeriesCoeffs& c);

} // namespace evans
