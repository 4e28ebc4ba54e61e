#include "evans/evans.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "evans/profile.hpp"
#include "evans/spectral.hpp"

namespace evans {

cplx evans_exp_factor(const ProfileTable& table, const ModeParams& mode, double t0)
{
    return std::exp(mode.r() * xi_integral(table, t0, mode.alpha, mode.beta));
}

cplx evans_bracket(double xi, const Vec4& z, const Vec6& mh, const Vec4& R, const Vec6& L,
                   const ModeParams& mode, BracketVariant variant)
{
    const double b2 = mode.beta * mode.beta;
    const cplx r = mode.r();
    const double s = variant == BracketVariant::Derived ? 1.0 : -1.0;
    cplx v = z[0] * (R[0] + s * (xi / b2) * L[0] + s * L[1]);
    v += xi * z[1] * (R[1] - s * r * L[0] + s * L[3]);
    v += xi * z[2] * (R[2] - s * r * L[1] - (xi / b2) * L[3]);
    v += xi * z[3] * (R[3] + s * r * L[2] + s * (xi / b2) * L[4] + s * L[5]);
    v += xi * (mh[0] * L[0] + mh[1] * L[1] + mh[2] * L[2]);
    v += xi * xi * (mh[3] * L[3] + mh[4] * L[4] + mh[5] * L[5]);
    return v;
}

OverlapWindow overlap_window(const ProfileTable& table, const ModeParams& mode,
                             const ModelParams& model, const EvansOptions& opts)
{
    OverlapWindow w;
    w.t_min = opts.t0;
    const SeriesCoeffs c = recurrence_coeffs(mode.r(), model, 8, SeriesVariant::Shifted);
    w.r_est = series_radius_estimate(c);
    if (opts.t_max > 0.0) {
        w.t_max = opts.t_max;
        return w;
    }
    // beta zeta(t, alpha) = beta alpha / xi^nu at y = -t/(alpha beta), increasing in t.
    const double x_max = 0.5 / std::max(w.r_est, 1e-12);
    auto f = [&](double t) {
        const double xi = table.xi(-t / (mode.alpha * mode.beta));
        return mode.beta * mode.alpha / std::pow(xi, model.nu) - x_max;
    };
    double hi = 2.0 * opts.t0, tmax;
    if (f(hi) >= 0.0) {
        tmax = hi;
        w.clamped = true;
    } else {
        while (f(hi) < 0.0 && hi < opts.fuchs.T_start) hi *= 2.0;
        if (f(hi) < 0.0) {
            tmax = opts.fuchs.T_start;
        } else {
            std::uintmax_t it = 100;
            auto r = boost::math::tools::toms748_solve(f, hi / 2.0, hi,
                                                        boost::math::tools::eps_tolerance<double>(40), it);
            tmax = 0.5 * (r.first + r.second);
        }
    }
    w.t_max = std::min(tmax, opts.fuchs.T_start);
    return w;
}

namespace {

cplx prefactor(const ProfileTable& table, const ModeParams& mode, const ModelParams& model,
               double t, cplx mu, cplx expf)
{
    const double xi0 = table.xistar;
    return std::exp(-(2.0 + mu / mode.beta) * t) * std::pow(t, 1.0 / (2.0 * model.nu)) * expf
         * ((1.0 - xi0) / xi0);
}

std::vector<EvansBreakdown> assemble(const ProfileTable& table, const ModeParams& mode,
                                     const ModelParams& model, const std::vector<double>& ts,
                                     const EvansOptions& opts)
{
    const double ab = mode.alpha * mode.beta;
    std::vector<double> ys;
    for (double t : ts) ys.push_back(-t / ab);
    const auto over = integrate_w2_plus(table, mode, model, ys, opts.overdense);
    const auto minus = full_solution(table, mode, model, ts, opts.fuchs, opts.t0);
    const cplx mu = mu_of(mode);
    const cplx expf = evans_exp_factor(table, mode, opts.t0);
    std::vector<EvansBreakdown> out;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        EvansBreakdown b;
        b.t = ts[k];
        b.y = ys[k];
        b.xi = table.xi(ys[k]);
        b.z = over[k].z;
        b.mhat = over[k].mhat;
        b.R = minus[k].R;
        b.L = minus[k].L;
        b.value = prefactor(table, mode, model, b.t, mu, expf)
                * evans_bracket(b.xi, b.z, b.mhat, b.R, b.L, mode, opts.bracket);
        out.push_back(b);
    }
    return out;
}

} // namespace

cplx evans_at(const ProfileTable& table, const ModeParams& mode, const ModelParams& model, double t,
              const EvansOptions& opts)
{
    validate(mode);
    if (!(mode.alpha > 0.0)) throw EvansError("domain", "evans_at needs alpha > 0");
    const OverlapWindow w = overlap_window(table, mode, model, opts);
    if (t < w.t_min || t > w.t_max * (1.0 + 1e-12))
        throw EvansError("out-of-overlap", "t outside the overlap window");
    return assemble(table, mode, model, {t}, opts).front().value;
}

EvansResult evans(const ProfileTable& table, const ModeParams& mode, const ModelParams& model,
                  const EvansOptions& opts)
{
    validate(mode);
    if (!(mode.alpha > 0.0)) throw EvansError("domain", "evans needs alpha > 0");
    if (opts.n_points < 3) throw EvansError("validation", "evans needs at least 3 overlap points");
    EvansResult res;
    res.window = overlap_window(table, mode, model, opts);
    std::vector<double> ts;
    for (int k = 0; k < opts.n_points; ++k)
        ts.push_back(res.window.t_min + (res.window.t_max - res.window.t_min) * k / (opts.n_points - 1));
    res.breakdown = assemble(table, mode, model, ts, opts);

    // Medoid: the sample with the least summed distance to the others.
    double best = -1.0;
    for (const auto& a : res.breakdown) {
        double d = 0.0;
        for (const auto& b : res.breakdown) d += std::abs(a.value - b.value);
        if (best < 0.0 || d < best) {
            best = d;
            res.value = a.value;
        }
    }
    for (const auto& b : res.breakdown) {
        res.eval_points.emplace_back(b.y, b.t);
        res.max_relative_spread = std::max(res.max_relative_spread, std::abs(b.value - res.value) / std::abs(res.value));
    }
    res.reliable = std::isfinite(res.max_relative_spread) && res.max_relative_spread <= opts.spread_tol;
    res.value_c0 = res.value * table.c0 / (mode.alpha * mode.beta);
    return res;
}

cplx evans_limit_alpha0(double beta, cplx gamma, const ModelParams& model, double t_star,
                        SeriesVariant variant, FuchsOptions fopts)
{
    if (!(t_star > 0.0)) throw EvansError("domain", "t_star must be > 0");
    const double nu = model.nu;
    const cplx r = gamma / beta;
    if (t_star > fopts.T_start) fopts.T_start = t_star;
    const MinusState m = model_solution(model, t_star, fopts);
    const Vec10 w = abar_bbar(nu * t_star / beta, beta, r, model, 1e-17, variant);
    const Vec4& R = m.R;
    const Vec6& L = m.L;
    cplx br;
    if (variant == SeriesVariant::Shifted) {
        br = (1.0 + w[0]) * (R[0] + L[1]) + w[1] * (R[1] - r * L[0] + L[3]) + w[2] * (R[2] - r * L[1])
           + w[3] * (R[3] + r * L[2] + L[5]);
    } else {
        br = (1.0 + w[0]) * (R[0] - L[1]) + w[1] * (R[1] + r * L[0] - L[3]) + w[2] * (R[2] + r * L[1])
           + w[3] * (R[3] - r * L[2] - L[5]);
    }
    for (int q = 0; q < 6; ++q) br += w[4 + q] * L[q];
    const double xi0 = (nu + 1.0) / (nu + 2.0);
    return std::exp((r - 1.0) * t_star) * std::pow(t_star, 1.0 / (2.0 * nu)) * ((1.0 - xi0) / xi0) * beta * br;
}

LargeTFit limit_large_t_fit(double beta, cplx gamma, const ModelParams& model,
                            const std::vector<double>& ts, SeriesVariant variant)
{
    const double nu = model.nu;
    const cplx r = gamma / beta;
    const double xi0 = (nu + 1.0) / (nu + 2.0);
    LargeTFit fit;
    fit.predicted = (r - 1.0) * (-(r + 1.0) / nu + 1.0 / (nu + 1.0));
    for (double t : ts) {
        const cplx ev = evans_limit_alpha0(beta, gamma, model, t, variant);
        const cplx q = ev / (std::exp((r + 1.0) * t) * std::pow(t, 1.0 / (2.0 * nu)) * beta * (1.0 - xi0) / xi0);
        fit.samples.emplace_back(t, q);
    }
    // Least squares of ln|Q| against ln t.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(fit.samples.size());
    for (const auto& [t, q] : fit.samples) {
        const double x = std::log(t), y = std::log(std::abs(q));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.exponent = n > 1 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
    const auto& last = fit.samples.back();
    fit.K = last.second / std::pow(last.first, fit.exponent);
    return fit;
}

} // namespace evans
