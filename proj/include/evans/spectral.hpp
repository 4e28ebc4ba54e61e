#pragma once

#include <array>

#include "evans/exterior.hpp"
#include "evans/types.hpp"

namespace evans {

class ProfileTable;

// Kull-Anisimov matrix: dX/dy + M0 X = 0.
Mat5 m0_matrix(double xi, const ModeParams& mode, const ModelParams& model);

// Conjugated matrix of dY/dy + alpha B Y = 0 (contains 1/(1 - xi)).
Mat5 b_matrix(double xi, const ModeParams& mode);

// B = Ba + (1 - xi) Bb + Bc / (1 - xi), each part regular at xi = 1.
struct BSplit {
    Mat5 a, b, c;
};
BSplit b_split(double xi, const ModeParams& mode);

// Change of unknowns Y = T X.
Mat5 t_matrix(double xi, const ModeParams& mode);

struct FuchsianMatrices {
    Mat5 M0p; // M0(p)
    Mat5 N;   // N z = (z1, 0, z4, z4, 0)
};
FuchsianMatrices fuchsian_matrices(cplx p);

struct SpectralSet {
    cplx lam0, lam_a_plus, lam_a_minus, lam_plus, lam_minus;
    Vec5 E0, Ea_plus, Ea_minus, F_plus, F_minus;
    double A0 = 0.0, B0 = 0.0; // A0 + i B0 = sqrt(1/4 + a^2 b^2 + a g)
    bool branch_ambiguous = false;

    std::array<cplx, 5> eigenvalues() const { return {lam0, lam_a_plus, lam_a_minus, lam_plus, lam_minus}; }
    std::array<Vec5, 5> eigenvectors() const { return {E0, Ea_plus, Ea_minus, F_plus, F_minus}; }
};

// Eigenpairs of -M0 from the closed forms.
SpectralSet eigenstructure(double xi, const ModeParams& mode, const ModelParams& model);

// Principal square root with Re >= 0; ties resolved by Im >= 0 and flagged.
cplx sqrt_right(cplx z, bool* tie = nullptr);

// mu(alpha) from lambda_-(1) - alpha beta = -1 + alpha mu.
cplx mu_of(const ModeParams& mode);

// Weighted Lambda^3 normal direction P(p) on the dual basis.
Wedge3 p_vector(cplx p);

struct NormalizationConstants {
    cplx mu{0.0};
    Wedge2 W_plus;
    Wedge3 S;
    Wedge3 P0;
    double c0 = 0.0;
};

NormalizationConstants normalization(const ModeParams& mode, const ModelParams& model,
                                     const ProfileTable& table);

} // namespace evans
