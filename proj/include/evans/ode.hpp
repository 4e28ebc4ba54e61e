#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "evans/types.hpp"

namespace evans::ode {

struct Tolerance {
    double rtol = 1e-12;
    double atol = 1e-14;
};

// Integrates the linear system dx/dt = A(t) x from t0 through the ordered
// sample times (increasing or decreasing). Complex states are carried as
// interleaved real arrays so the stock odeint algebra applies.
template <int N>
std::vector<Eigen::Matrix<cplx, N, 1>> integrate_linear(
    const std::function<Eigen::Matrix<cplx, N, N>(double)>& a,
    const Eigen::Matrix<cplx, N, 1>& x0, double t0, const std::vector<double>& times,
    Tolerance tol = {})
{
    using namespace boost::numeric::odeint;
    using State = std::array<double, 2 * N>;
    using Vec = Eigen::Matrix<cplx, N, 1>;

    State x{};
    Eigen::Map<Vec>(reinterpret_cast<cplx*>(x.data())) = x0;
    std::vector<Vec> out;
    out.reserve(times.size());
    if (times.empty()) return out;

    auto rhs = [&](const State& s, State& ds, double t) {
        Eigen::Map<const Vec> v(reinterpret_cast<const cplx*>(s.data()));
        Eigen::Map<Vec> dv(reinterpret_cast<cplx*>(ds.data()));
        dv = a(t) * v;
    };
    auto obs = [&](const State& s, double) {
        const Vec v = Eigen::Map<const Vec>(reinterpret_cast<const cplx*>(s.data()));
        if (!v.allFinite() || v.cwiseAbs().maxCoeff() > 1e300)
            throw EvansError("overflow", "linear integration left the representable range");
        out.push_back(v);
    };

    std::vector<double> ts;
    ts.reserve(times.size() + 1);
    ts.push_back(t0);
    ts.insert(ts.end(), times.begin(), times.end());
    const double span = std::abs(ts.back() - t0);
    const double dir = ts.back() < t0 ? -1.0 : 1.0;
    double dt = dir * std::max(1e-6, 1e-3 * span);
    auto stepper = make_controlled(tol.atol, tol.rtol, runge_kutta_fehlberg78<State>());
    integrate_times(stepper, rhs, x, ts.begin(), ts.end(), dt, obs,
                    max_step_checker(1000000));
    out.erase(out.begin());
    return out;
}

// Fixed-step three-stage Radau IIA for the stiff linear system dy/ds = J(s) y.
// L-stable, so modes decaying toward s1 are damped at any step size.
template <int N>
Eigen::Matrix<cplx, N, 1> radau_iia_linear(
    const std::function<Eigen::Matrix<cplx, N, N>(double)>& jac, double s0, double s1,
    const Eigen::Matrix<cplx, N, 1>& y0, int steps)
{
    const double r6 = std::sqrt(6.0);
    const double A[3][3] = {
        {(88 - 7 * r6) / 360, (296 - 169 * r6) / 1800, (-2 + 3 * r6) / 225},
        {(296 + 169 * r6) / 1800, (88 + 7 * r6) / 360, (-2 - 3 * r6) / 225},
        {(16 - r6) / 36, (16 + r6) / 36, 1.0 / 9},
    };
    const double c[3] = {(4 - r6) / 10, (4 + r6) / 10, 1.0};
    const double h = (s1 - s0) / steps;

    using Big = Eigen::Matrix<cplx, 3 * N, 3 * N>;
    using BigVec = Eigen::Matrix<cplx, 3 * N, 1>;
    Eigen::Matrix<cplx, N, 1> y = y0;
    double s = s0;
    for (int k = 0; k < steps; ++k) {
        Big m = Big::Identity();
        for (int j = 0; j < 3; ++j) {
            const Eigen::Matrix<cplx, N, N> jj = jac(s + c[j] * h);
            for (int i = 0; i < 3; ++i)
                m.template block<N, N>(N * i, N * j) -= (h * A[i][j]) * jj;
        }
        BigVec rhs;
        for (int i = 0; i < 3; ++i) rhs.template segment<N>(N * i) = y;
        const BigVec stages = m.partialPivLu().solve(rhs);
        y = stages.template segment<N>(2 * N);
        s = s0 + (k + 1) * h;
    }
    return y;
}

} // namespace evans::ode
