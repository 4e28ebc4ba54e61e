#include "evans/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace evans {

void validate(const ModelParams& model)
{
    if (!(model.nu > 1.0) || !std::isfinite(model.nu))
        throw EvansError("validation", "nu must be a finite number > 1");
}

void validate(const ModeParams& mode)
{
    if (!(mode.alpha >= 0.0) || !std::isfinite(mode.alpha))
        throw EvansError("validation", "alpha must be >= 0");
    if (!(mode.beta > 0.0) || !std::isfinite(mode.beta))
        throw EvansError("validation", "beta must be > 0");
    if (!std::isfinite(mode.gamma.real()) || !std::isfinite(mode.gamma.imag()))
        throw EvansError("validation", "gamma must be finite");
}

DimensionlessParams params_from_physical(const PhysicalParams& phys)
{
    if (!(phys.k > 0 && phys.L0 > 0 && phys.Va > 0 && phys.g > 0))
        throw EvansError("validation", "physical parameters must be strictly positive");
    DimensionlessParams d;
    d.eps = phys.k * phys.L0;
    d.Fr = phys.Va * phys.Va / (phys.g * phys.L0);
    d.alpha = std::sqrt(d.eps / d.Fr);
    d.beta = std::sqrt(d.eps * d.Fr);
    return d;
}

namespace {

bool integer_nu(double nu) { return std::abs(nu - std::round(nu)) < 1e-12; }

// Number of explicit power terms, n'.
int n_terms(double nu) { return integer_nu(nu) ? int(std::round(nu)) - 1 : int(std::floor(nu)); }

// int_0^xi (eta^{-theta} - 1)/(1 - eta) d eta after eta = u^m, m = 1/(1 - theta),
// which removes the endpoint singularity.
double h_regular(double theta, double xi)
{
    if (xi < 0.1) {
        // Termwise sum of (eta^{-theta} - 1) sum_k eta^k.
        double sum = 0.0, xk = std::pow(xi, 1.0 - theta), yk = xi;
        for (int k = 0; k < 60; ++k) {
            const double term = xk / (k + 1 - theta) - yk / (k + 1);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            xk *= xi;
            yk *= xi;
        }
        return sum;
    }
    const double m = 1.0 / (1.0 - theta);
    const double upper = std::pow(xi, 1.0 / m);
    auto f = [&](double u) {
        if (u <= 0.0) return m;
        const double lu = std::log(u);
        return m * std::expm1(m * theta * lu) / std::expm1(m * lu);
    };
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, 0.0, upper, 12, 1e-13);
}

// H(xi) given xi and ln(1 - xi), kept separate for accuracy near xi = 1.
double h_of(double nu, double xi, double log_s)
{
    if (integer_nu(nu)) return std::log(xi) - log_s;
    const double theta = nu - std::floor(nu);
    return -log_s + h_regular(theta, xi);
}

double power_sum(double nu, double xi)
{
    double s = 0.0;
    const double lx = std::log(xi);
    for (int p = 0; p <= n_terms(nu); ++p) s -= std::exp((p - nu) * lx) / (nu - p);
    return s;
}

double residual_split(double nu, double ystar, double y, double xi, double log_s)
{
    return power_sum(nu, xi) + h_of(nu, xi, log_s) - (y - ystar);
}

} // namespace

double profile_h(const ModelParams& model, double xi)
{
    if (!(xi > 0.0 && xi < 1.0)) throw EvansError("domain", "profile_h needs 0 < xi < 1");
    return h_of(model.nu, xi, std::log1p(-xi));
}

double profile_ystar(const ModelParams& model)
{
    validate(model);
    const double xi0 = (model.nu + 1.0) / (model.nu + 2.0);
    return -(power_sum(model.nu, xi0) + h_of(model.nu, xi0, std::log1p(-xi0)));
}

double implicit_residual(const ModelParams& model, double y, double xi)
{
    if (!(xi > 0.0 && xi < 1.0)) throw EvansError("domain", "implicit_residual needs 0 < xi < 1");
    return residual_split(model.nu, profile_ystar(model), y, xi, std::log1p(-xi));
}

double c0_analytic(const ModelParams& model)
{
    const double nu = model.nu;
    double s = 0.0;
    for (int p = 0; p <= n_terms(nu); ++p) s += 1.0 / (nu - p);
    const double i1 = integer_nu(nu) ? 0.0 : h_regular(nu - std::floor(nu), 1.0);
    return std::exp(profile_ystar(model) - s + i1);
}

namespace {

struct Tail {
    double xi;
    double q; // g^nu - 1 = -nu y xi^nu - 1
};

// Fixed point for q in xi = t (1 + q)^{1/nu}, t = (-1/(nu y))^{1/nu}; iterating on q keeps
// the small excess at full relative precision.
Tail left_tail(double nu, double ystar, double y, int* iterations)
{
    if (!(y < 0.0)) throw EvansError("domain", "left tail needs y < 0");
    const double t = std::pow(-1.0 / (nu * y), 1.0 / nu);
    double q = 0.0, x = t;
    int it = 0;
    for (; it < 200; ++it) {
        x = t * std::pow(1.0 + q, 1.0 / nu);
        double sum = 0.0;
        for (int p = 1; p <= n_terms(nu); ++p) sum += nu / (nu - p) * std::pow(x, p);
        const double qn = sum + (1.0 + q) * (h_of(nu, x, std::log1p(-x)) + ystar) / y;
        if (!(qn > -1.0)) throw EvansError("tail", "fixed point left its domain; y too close to 0");
        const bool done = std::abs(qn - q) <= 4e-16 * std::abs(qn);
        q = qn;
        if (done) break;
    }
    if (iterations) *iterations = it + 1;
    return {t * std::pow(1.0 + q, 1.0 / nu), q};
}

} // namespace

double xi_left_tail(const ModelParams& model, double y, int* iterations)
{
    return left_tail(model.nu, profile_ystar(model), y, iterations).xi;
}

double xi_from_relation(const ModelParams& model, double y)
{
    const double nu = model.nu;
    const double ystar = profile_ystar(model);
    // Unknown v = logit(xi), so both ends of (0, 1) keep full precision.
    auto f = [&](double v) {
        const double xi = 1.0 / (1.0 + std::exp(-v));
        const double log_s = -std::log1p(std::exp(v));
        return residual_split(nu, ystar, y, xi, log_s);
    };
    double lo = -5.0, hi = 5.0;
    while (f(lo) > 0.0) lo *= 2.0;
    while (f(hi) < 0.0) hi *= 2.0;
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(
        f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    const double v = 0.5 * (r.first + r.second);
    return 1.0 / (1.0 + std::exp(-v));
}

void ProfileTable::interp(double y, double& log_xi, double& log_s) const
{
    auto it = std::upper_bound(samples.begin(), samples.end(), y,
                               [](double v, const ProfileSample& s) { return v < s.y; });
    std::size_t i = std::clamp<std::size_t>(std::distance(samples.begin(), it), 1, samples.size() - 1);
    const ProfileSample& a = samples[i - 1];
    const ProfileSample& b = samples[i];
    const double h = b.y - a.y;
    const double u = (y - a.y) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    auto slopes = [&](const ProfileSample& s, double& dlx, double& dls) {
        const double xn = std::exp(nu * s.log_xi);
        dlx = xn * std::exp(s.log_s);
        dls = -xn * std::exp(s.log_xi);
    };
    double ax, as, bx, bs;
    slopes(a, ax, as);
    slopes(b, bx, bs);
    log_xi = h00 * a.log_xi + h10 * h * ax + h01 * b.log_xi + h11 * h * bx;
    log_s = h00 * a.log_s + h10 * h * as + h01 * b.log_s + h11 * h * bs;
}

double ProfileTable::xi(double y) const
{
    if (y < y_min) return left_tail(nu, ystar, y, nullptr).xi;
    if (y > y_max) return -std::expm1(std::log(c0) - y);
    double lx, ls;
    interp(y, lx, ls);
    return y >= 0.0 ? -std::expm1(ls) : std::exp(lx);
}

double ProfileTable::tail_excess(double y) const
{
    if (!(y < 0.0)) throw EvansError("domain", "tail_excess needs y < 0");
    if (y < y_min) return left_tail(nu, ystar, y, nullptr).q;
    return -nu * y * std::pow(xi(y), nu) - 1.0;
}

double ProfileTable::one_minus_xi(double y) const
{
    if (y < y_min) return 1.0 - left_tail(nu, ystar, y, nullptr).xi;
    if (y > y_max) return c0 * std::exp(-y);
    double lx, ls;
    interp(y, lx, ls);
    return y >= 0.0 ? std::exp(ls) : -std::expm1(lx);
}

double ProfileTable::dxi_dy(double y) const
{
    const double x = xi(y);
    return std::pow(x, nu + 1.0) * one_minus_xi(y);
}

nlohmann::json ProfileTable::to_json() const
{
    nlohmann::json j;
    j["schema"] = 1;
    j["kind"] = "profile";
    j["nu"] = nu;
    j["tol"] = tol;
    j["y_min"] = y_min;
    j["y_max"] = y_max;
    j["c0"] = c0;
    j["ystar"] = ystar;
    j["xistar"] = xistar;
    auto& s = j["samples"] = nlohmann::json::array();
    for (const auto& p : samples) s.push_back({p.y, p.log_xi, p.log_s});
    return j;
}

ProfileTable ProfileTable::from_json(const nlohmann::json& j)
{
    if (j.value("kind", "") != "profile" || j.value("schema", 0) != 1)
        throw EvansError("validation", "not a schema-1 profile record");
    ProfileTable t;
    t.nu = j.at("nu");
    t.tol = j.at("tol");
    t.y_min = j.at("y_min");
    t.y_max = j.at("y_max");
    t.c0 = j.at("c0");
    t.ystar = j.at("ystar");
    t.xistar = j.at("xistar");
    for (const auto& p : j.at("samples")) t.samples.push_back({p[0], p[1], p[2]});
    if (t.samples.size() < 2) throw EvansError("validation", "profile record has no samples");
    return t;
}

void save_profile(const ProfileTable& table, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw EvansError("io", "cannot write " + path);
    out << table.to_json().dump();
}

ProfileTable load_profile(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw EvansError("io", "cannot read " + path);
    return ProfileTable::from_json(nlohmann::json::parse(in));
}

namespace {

using State1 = std::array<double, 1>;

template <class Rhs>
std::vector<double> integrate_scalar(Rhs rhs, double x0, const std::vector<double>& times, double tol)
{
    using namespace boost::numeric::odeint;
    std::vector<double> out;
    State1 x{x0};
    const double dt = times.size() > 1 ? (times[1] - times[0]) * 0.5 : 1e-3;
    auto stepper = make_controlled(tol * 1e-2, tol, runge_kutta_fehlberg78<State1>());
    try {
        integrate_times(stepper, rhs, x, times.begin(), times.end(), dt,
                        [&](const State1& s, double) { out.push_back(s[0]); },
                        max_step_checker(1000000));
    } catch (const std::exception& e) {
        throw EvansError("integration-failure", e.what());
    }
    return out;
}

} // namespace

ProfileTable build_profile(const ModelParams& model, double y_min, double y_max, double tol)
{
    validate(model);
    if (!(y_min < 0.0 && y_max > 0.0)) throw EvansError("validation", "need y_min < 0 < y_max");
    if (!(tol > 0.0)) throw EvansError("validation", "tol must be > 0");
    const double nu = model.nu;
    const double h = 0.005;
    const double y_dense = -20.0;

    ProfileTable t;
    t.nu = nu;
    t.tol = tol;
    t.y_min = y_min;
    t.y_max = y_max;
    t.ystar = profile_ystar(model);
    t.xistar = (nu + 1.0) / (nu + 2.0);

    // Left branch in ln xi, from the anchor down to y_min.
    std::vector<double> left{0.0};
    for (int k = 1;; ++k) {
        const double y = -k * h;
        if (y <= y_dense || y <= y_min) break;
        left.push_back(y);
    }
    for (double y = std::max(y_dense, left.back() - h); y > y_min; y *= 1.002) left.push_back(y);
    left.push_back(y_min);
    auto lrhs = [nu](const State1& v, State1& dv, double) {
        const double x = std::exp(v[0]);
        dv[0] = std::exp(nu * v[0]) * (1.0 - x);
    };
    const std::vector<double> lv = integrate_scalar(lrhs, std::log(t.xistar), left, tol);

    // Right branch in ln(1 - xi), from the anchor up to y_max.
    std::vector<double> right{0.0};
    const int nr = int(std::ceil(y_max / h));
    for (int k = 1; k <= nr; ++k) right.push_back(std::min(y_max, k * h));
    auto rrhs = [nu](const State1& w, State1& dw, double) {
        const double x = -std::expm1(w[0]);
        dw[0] = -std::pow(x, nu + 1.0);
    };
    const std::vector<double> rv = integrate_scalar(rrhs, std::log1p(-t.xistar), right, tol);

    for (std::size_t i = left.size(); i-- > 1;)
        t.samples.push_back({left[i], lv[i], std::log1p(-std::exp(lv[i]))});
    for (std::size_t i = 0; i < right.size(); ++i)
        t.samples.push_back({right[i], std::log1p(-std::exp(rv[i])), rv[i]});

    t.c0 = std::exp(t.samples.back().log_s + t.samples.back().y);
    return t;
}

ProfileTable build_default_profile(const ModelParams& model)
{
    validate(model);
    // y where xi = 0.02, straight from the implicit relation.
    const double xs = 0.02;
    const double y_switch =
        profile_ystar(model) + power_sum(model.nu, xs) + h_of(model.nu, xs, std::log1p(-xs));
    return build_profile(model, y_switch, 40.0, 1e-12);
}

double xi_integral(const ProfileTable& table, double t, double alpha, double beta)
{
    if (t == 0.0) return 0.0;
    const double ab = alpha * beta;
    auto f = [&](double s) { return table.xi(-s / ab); };
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, 0.0, t, 15, 1e-13);
}

FuchsCoords fuchs_coords(const ProfileTable& table, double t, const ModeParams& mode, double t0)
{
    if (!(t > 0.0) || !(mode.alpha > 0.0))
        throw EvansError("domain", "fuchs_coords needs t > 0 and alpha > 0");
    FuchsCoords c;
    c.t = t;
    const double xi = table.xi(-t / (mode.alpha * mode.beta));
    c.eta = xi / std::pow(mode.alpha, 1.0 / table.nu);
    c.p = mode.r() * xi;
    c.zeta = mode.alpha / std::pow(xi, table.nu);
    const double ab = mode.alpha * mode.beta;
    auto f = [&](double s) { return table.xi(-s / ab); };
    using boost::math::quadrature::gauss_kronrod;
    const double q = t == t0 ? 0.0 : gauss_kronrod<double, 31>::integrate(f, t0, t, 15, 1e-13);
    c.psi0 = mode.r() * q;
    return c;
}

} // namespace evans
