#include "evans/spectral.hpp"

#include <cmath>

#include "evans/profile.hpp"

namespace evans {

Mat5 m0_matrix(double xi, const ModeParams& mode, const ModelParams& model)
{
    if (!(xi > 0.0 && xi <= 1.0)) throw EvansError("domain", "m0_matrix needs 0 < xi <= 1");
    const double a = mode.alpha, b = mode.beta, nu = model.nu;
    const cplx g = mode.gamma;
    const double xn = std::pow(xi, nu);
    const double xn2 = xn * xi * xi;
    Mat5 m = Mat5::Zero();
    m(0, 2) = a * b * xi;
    m(0, 3) = a * g * xn2;
    m(1, 0) = a * g;
    m(1, 2) = -a * b;
    m(1, 3) = (a / b) * xn2;
    m(2, 0) = 2.0 * a * b / xi;
    m(2, 1) = a * b;
    m(2, 2) = -a * g * xi;
    m(2, 3) = a * b * xn;
    m(3, 0) = 1.0 / xi;
    m(3, 3) = xn;
    m(3, 4) = -1.0;
    m(4, 2) = a * b;
    m(4, 3) = -a * a * b * b;
    return m;
}

BSplit b_split(double xi, const ModeParams& mode)
{
    const double b = mode.beta;
    const cplx g = mode.gamma;
    BSplit s{Mat5::Zero(), Mat5::Zero(), Mat5::Zero()};
    // Columns give the action on i1..i5.
    s.a(0, 0) = -g;
    s.a(1, 0) = g - 1.0 / b;
    s.a(2, 0) = b / xi;
    s.c(3, 0) = b;
    s.a(2, 1) = b;
    s.a(0, 2) = b * xi;
    s.a(1, 2) = -b;
    s.a(2, 2) = -g * xi;
    s.a(4, 2) = b;
    s.b(0, 3) = b - g * g / b;
    s.b(1, 3) = (g / b) * (g - 1.0 / b) - b / xi;
    s.b(2, 3) = 1.0 / b + g * (1.0 - xi) / xi;
    s.a(3, 3) = g;
    s.a(0, 4) = g * xi;
    s.a(1, 4) = xi / b;
    s.a(2, 4) = b;
    s.c(3, 4) = -b * xi;
    return s;
}

Mat5 b_matrix(double xi, const ModeParams& mode)
{
    if (!(xi > 0.0) || xi >= 1.0 - 1e-12)
        throw EvansError("singular-at-one", "b_matrix needs 0 < xi < 1 - 1e-12; use the (z, m) form");
    const BSplit s = b_split(xi, mode);
    const double om = 1.0 - xi;
    return s.a + om * s.b + s.c / om;
}

Mat5 t_matrix(double xi, const ModeParams& mode)
{
    const double a = mode.alpha, b = mode.beta;
    Mat5 t = Mat5::Identity();
    t(0, 3) = -a * mode.gamma * xi;
    t(1, 3) = -(a / b) * xi;
    t(2, 3) = -a * b;
    t(3, 3) = a * b * xi / (1.0 - xi);
    return t;
}

FuchsianMatrices fuchsian_matrices(cplx p)
{
    FuchsianMatrices f{Mat5::Zero(), Mat5::Zero()};
    Mat5& m = f.M0p;
    m(0, 2) = 1.0;
    m(1, 0) = p;
    m(1, 2) = -1.0;
    m(2, 0) = 2.0;
    m(2, 1) = 1.0;
    m(2, 2) = -p;
    m(3, 0) = 1.0;
    m(3, 4) = -1.0;
    m(4, 2) = 1.0;
    m(4, 3) = -1.0;
    f.N(0, 0) = 1.0;
    f.N(2, 3) = 1.0;
    f.N(3, 3) = 1.0;
    return f;
}

cplx sqrt_right(cplx z, bool* tie)
{
    cplx s = std::sqrt(z);
    if (s.real() < 0.0) s = -s;
    const bool t = std::abs(s.real()) <= 1e-14 * std::max(1.0, std::abs(s));
    if (t && s.imag() < 0.0) s = -s;
    if (tie) *tie = t;
    return s;
}

SpectralSet eigenstructure(double xi, const ModeParams& mode, const ModelParams& model)
{
    if (!(xi > 0.0 && xi <= 1.0)) throw EvansError("domain", "eigenstructure needs 0 < xi <= 1");
    const double a = mode.alpha, b = mode.beta, nu = model.nu;
    const cplx g = mode.gamma;
    const double xn = std::pow(xi, nu);

    SpectralSet s;
    s.lam0 = a * g * xi;
    s.lam_a_plus = a * b;
    s.lam_a_minus = -a * b;
    bool tie = false;
    const cplx root = sqrt_right(xn * xn / 4.0 + a * g * xn * xi + a * a * b * b, &tie);
    s.branch_ambiguous = tie;
    s.lam_plus = -xn / 2.0 + root;
    s.lam_minus = -xn / 2.0 - root;
    const cplx r1 = sqrt_right(0.25 + a * a * b * b + a * g);
    s.A0 = r1.real();
    s.B0 = r1.imag();

    s.E0 << b * xi, -2.0 * b, -g * xi, 0.0, b;
    s.Ea_plus << -b * xi, b + g * xi, b, 0.0, -b;
    s.Ea_minus << -b * xi, b - g * xi, -b, 0.0, -b;

    Vec5 R, T;
    R << g * xi * xi, xi * xi / b, b, 0.0, 0.0;
    T << xi * (g * g * xi * xi - b * b), b * b - g * g * xi * xi + g * xi * xi * xi / b, -xi * xi, 0.0, 0.0;
    auto make_f = [&](cplx lam) {
        Vec5 f = unit(4);
        if (a == 0.0) return f;
        const cplx d = lam - a * g * xi;
        f += a * R + (a * a / d) * T + (a * a * a * xi * xi / (d * d)) * s.E0;
        return f;
    };
    s.F_plus = make_f(s.lam_plus);
    s.F_minus = make_f(s.lam_minus);
    return s;
}

cplx mu_of(const ModeParams& mode)
{
    const double a = mode.alpha, b = mode.beta;
    const cplx g = mode.gamma;
    const cplx lm = -0.5 - sqrt_right(0.25 + a * a * b * b + a * g);
    return -b + (g + a * b * b) / lm;
}

Wedge3 p_vector(cplx p)
{
    Wedge3 w;
    w.c << 2.0 + p, 1.0, 1.0, 0.0, -1.0, -1.0, -(2.0 + p), 0.0, -1.0, -1.0;
    return w;
}

NormalizationConstants normalization(const ModeParams& mode, const ModelParams& model,
                                     const ProfileTable& table)
{
    validate(mode);
    NormalizationConstants n;
    n.mu = mu_of(mode);
    const SpectralSet s = eigenstructure(1.0, mode, model);
    n.W_plus = wedge2(s.F_minus, s.Ea_minus);
    n.P0 = p_vector(0.0);
    n.S.c << 2.0, 1.0, 1.0, 0.0, -1.0, -1.0, -2.0, 0.0, -1.0, -1.0;
    n.c0 = table.c0;
    return n;
}

} // namespace evans
