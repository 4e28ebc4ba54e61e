#include "evans/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "evans/ode.hpp"
#include "evans/profile.hpp"
#include "evans/spectral.hpp"

namespace evans {

Mat5 fuchs_z_matrix(double xi, double t, const ModeParams& mode, const ModelParams& model)
{
    (void)t;
    const double b = mode.beta;
    const cplx p = mode.r() * xi;
    const double e = std::pow(xi, model.nu) / (mode.alpha * b);
    Mat5 a = fuchsian_matrices(p).M0p;
    a(0, 0) += e * (1.0 - xi);
    a(0, 3) += p * e;
    a(1, 3) += (xi * xi / (b * b)) * e;
    a(2, 3) += e;
    a(3, 3) += e;
    return a;
}

Mat10 weighted_kernel(double xi, double t, const ModeParams& mode, const ModelParams& model)
{
    const cplx p = mode.r() * xi;
    return lift3(fuchs_z_matrix(xi, t, mode, model))
         + (2.0 + p - 1.0 / (2.0 * model.nu * t)) * Mat10::Identity();
}

Mat10 model_kernel(double t, const ModelParams& model)
{
    const FuchsianMatrices f = fuchsian_matrices(0.0);
    const Mat5 a = f.M0p + f.N / (model.nu * t);
    return lift3(a) + (2.0 - 1.0 / (2.0 * model.nu * t)) * Mat10::Identity();
}

Wedge3 MinusState::as_wedge() const
{
    Wedge3 w;
    w.c.head<4>() = R;
    w.c.tail<6>() = L;
    return w;
}

cplx far_amplitude(const ProfileTable& table, const ModeParams& mode, const ModelParams& model,
                   double T)
{
    const double nu = model.nu, ab = mode.alpha * mode.beta;
    const cplx r = mode.r();
    // kappa1 dt in w = t^{-1/nu}: (nu t e X - 1)/(2 w) dw, X = (1 + p - p^2 - p xi)/(1 + p).
    auto integrand = [&](double w, bool im) {
        const double t = std::pow(w, -nu);
        const double xi = table.xi(-t / ab);
        const cplx p = r * xi;
        const double q = table.tail_excess(-t / ab);
        // nu t e X - 1 with nu t e = 1 + q and X - 1 = -p (p + xi)/(1 + p).
        const cplx xm1 = -p * (p + xi) / (1.0 + p);
        const cplx v = (q + (1.0 + q) * xm1) / (2.0 * w);
        return im ? v.imag() : v.real();
    };
    // w = u^m makes the fractional powers xi^{1 - theta} smooth at w = 0.
    const double theta = nu - std::floor(nu);
    const double m = theta > 1e-12 ? 1.0 / (1.0 - theta) : 1.0;
    const double umax = std::pow(T, -1.0 / (nu * m));
    auto g = [&](double u, bool im) { return u > 0.0 ? m * std::pow(u, m - 1.0) * integrand(std::pow(u, m), im) : 0.0; };
    using boost::math::quadrature::gauss_kronrod;
    const double re = gauss_kronrod<double, 31>::integrate([&](double u) { return g(u, false); }, 0.0, umax, 12, 1e-13);
    const double im = gauss_kronrod<double, 31>::integrate([&](double u) { return g(u, true); }, 0.0, umax, 12, 1e-13);
    const cplx p_far = r * table.xi(-T / ab);
    return std::exp(-cplx(re, im)) / std::sqrt(1.0 + p_far);
}

namespace {

std::vector<MinusState> solve_weighted(const std::function<Mat10(double)>& kernel, const Vec10& v_far,
                                       const std::vector<double>& ts, const FuchsOptions& opts,
                                       const std::function<cplx(double)>& log_weight)
{
    for (double t : ts)
        if (!(t >= opts.t_floor) || t > opts.T_start)
            throw EvansError("domain", "Fuchsian evaluation needs t_floor <= t <= T_start");
    Vec10 v = v_far;
    if (opts.far_leg && opts.T_far > opts.T_start) {
        const double s0 = std::log(opts.T_far), s1 = std::log(opts.T_start);
        const int n = std::max(1, int(std::ceil((s0 - s1) / opts.h_far)));
        std::function<Mat10(double)> jac = [&](double s) {
            const double t = std::exp(s);
            return Mat10(t * kernel(t));
        };
        v = ode::radau_iia_linear<10>(jac, s0, s1, v, n);
    }
    std::vector<std::size_t> order(ts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return ts[i] > ts[j]; });
    std::vector<double> sorted;
    std::vector<MinusState> out(ts.size());
    std::vector<std::size_t> idx;
    for (std::size_t k : order) {
        if (ts[k] == opts.T_start) {
            out[k].t = ts[k];
            out[k].R = v.head<4>();
            out[k].L = v.tail<6>();
            out[k].log_weight = log_weight(ts[k]);
        } else {
            sorted.push_back(ts[k]);
            idx.push_back(k);
        }
    }
    const auto sol = ode::integrate_linear<10>(kernel, v, opts.T_start, sorted, {opts.rtol, opts.atol});
    for (std::size_t k = 0; k < sol.size(); ++k) {
        MinusState& m = out[idx[k]];
        m.t = sorted[k];
        m.R = sol[k].head<4>();
        m.L = sol[k].tail<6>();
        m.log_weight = log_weight(sorted[k]);
    }
    return out;
}

} // namespace

std::vector<MinusState> model_solution(const ModelParams& model, const std::vector<double>& ts,
                                       FuchsOptions opts)
{
    validate(model);
    std::function<Mat10(double)> k = [&](double t) { return model_kernel(t, model); };
    auto lw = [&](double t) { return cplx(2.0 * t - std::log(t) / (2.0 * model.nu)); };
    return solve_weighted(k, p_vector(0.0).c, ts, opts, lw);
}

MinusState model_solution(const ModelParams& model, double t, FuchsOptions opts)
{
    return model_solution(model, std::vector<double>{t}, opts).front();
}

std::vector<MinusState> full_solution(const ProfileTable& table, const ModeParams& mode,
                                      const ModelParams& model, const std::vector<double>& ts,
                                      FuchsOptions opts, double t0)
{
    validate(mode);
    if (!(mode.alpha > 0.0)) throw EvansError("domain", "full_solution needs alpha > 0");
    const double ab = mode.alpha * mode.beta;
    std::function<Mat10(double)> k = [&](double t) {
        return weighted_kernel(table.xi(-t / ab), t, mode, model);
    };
    Vec10 v_far;
    if (opts.far_leg && opts.T_far > opts.T_start) {
        const cplx p = mode.r() * table.xi(-opts.T_far / ab);
        v_far = far_amplitude(table, mode, model, opts.T_far) * p_vector(p).c;
    } else {
        v_far = p_vector(0.0).c;
    }
    auto lw = [&](double t) {
        return 2.0 * t + fuchs_coords(table, t, mode, t0).psi0 - std::log(t) / (2.0 * model.nu);
    };
    return solve_weighted(k, v_far, ts, opts, lw);
}

MinusState rl_at(const ProfileTable& table, const ModeParams& mode, const ModelParams& model,
                 double t, FuchsOptions opts, double t0)
{
    return full_solution(table, mode, model, std::vector<double>{t}, opts, t0).front();
}

} // namespace evans
