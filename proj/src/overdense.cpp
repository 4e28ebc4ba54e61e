#include "evans/overdense.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "evans/ode.hpp"
#include "evans/profile.hpp"
#include "evans/spectral.hpp"

namespace evans {

namespace {

struct Lifted {
    Mat10 a, b, c;
};

Lifted lifted_parts(double xi, const ModeParams& mode)
{
    const BSplit s = b_split(xi, mode);
    return {lift2(s.a), lift2(s.b), lift2(s.c)};
}

} // namespace

Mat10 khat_matrix(double xi, double s, const ModeParams& mode)
{
    const Lifted l = lifted_parts(xi, mode);
    Mat10 k;
    k.topLeftCorner<4, 4>() = l.a.topLeftCorner<4, 4>() + s * l.b.topLeftCorner<4, 4>();
    k.topRightCorner<4, 6>() = s * l.a.topRightCorner<4, 6>() + s * s * l.b.topRightCorner<4, 6>()
                             + l.c.topRightCorner<4, 6>();
    k.bottomLeftCorner<6, 4>() = l.b.bottomLeftCorner<6, 4>();
    k.bottomRightCorner<6, 6>() = l.a.bottomRightCorner<6, 6>() + s * l.b.bottomRightCorner<6, 6>();
    return k;
}

KhatDefect khat_defect(double xi, const ModeParams& mode)
{
    const Lifted l = lifted_parts(xi, mode);
    KhatDefect d;
    d.c_ff = l.c.topLeftCorner<4, 4>().cwiseAbs().maxCoeff();
    d.a_gf = l.a.bottomLeftCorner<6, 4>().cwiseAbs().maxCoeff();
    d.c_gf = l.c.bottomLeftCorner<6, 4>().cwiseAbs().maxCoeff();
    d.c_gg = l.c.bottomRightCorner<6, 6>().cwiseAbs().maxCoeff();
    return d;
}

Mat10 overdense_matrix(double xi, double s, const ModeParams& mode, const ModelParams& model,
                       cplx mu)
{
    Mat10 a = -mode.alpha * (khat_matrix(xi, s, mode) + mu * Mat10::Identity());
    const double w = std::pow(xi, model.nu + 1.0);
    for (int i = 4; i < 10; ++i) a(i, i) += w;
    return a;
}

std::vector<cplx> mu_series(const ModeParams& mode, int k)
{
    const double b = mode.beta;
    const cplx g = mode.gamma;
    std::vector<cplx> q(k + 1, 0.0), sq(k + 1, 0.0), lam(k + 1, 0.0), num(k + 1, 0.0),
        quo(k + 1, 0.0);
    q[0] = 0.25;
    if (k >= 1) q[1] = g;
    if (k >= 2) q[2] = b * b;
    sq[0] = 0.5;
    for (int n = 1; n <= k; ++n) {
        cplx acc = q[n];
        for (int j = 1; j < n; ++j) acc -= sq[j] * sq[n - j];
        sq[n] = acc / (2.0 * sq[0]);
    }
    for (int n = 0; n <= k; ++n) lam[n] = -sq[n];
    lam[0] -= 0.5;
    num[0] = g;
    if (k >= 1) num[1] = b * b;
    for (int n = 0; n <= k; ++n) {
        cplx acc = num[n];
        for (int j = 1; j <= n; ++j) acc -= lam[j] * quo[n - j];
        quo[n] = acc / lam[0];
    }
    quo[0] -= b;
    return quo;
}

Wedge2 OverdenseState::as_wedge() const
{
    Wedge2 w;
    w.c.head<4>() = z;
    w.c.tail<6>() = m;
    return w;
}

double default_y_start(const ProfileTable& table, double s_target)
{
    return std::log(table.c0 / s_target);
}

Vec10 overdense_null_vector(const ModeParams& mode, const ModelParams& model)
{
    const double b = mode.beta;
    const cplx g = mode.gamma;
    Vec10 u = Vec10::Zero();
    u.head<4>() << b, g - b, b, -b;
    if (mode.alpha == 0.0) return u;
    const double a = mode.alpha;
    const cplx mu = mu_of(mode);
    const Mat10 k = khat_matrix(1.0, 0.0, mode);
    (void)model;
    const Eigen::Matrix<cplx, 6, 6> G =
        Eigen::Matrix<cplx, 6, 6>::Identity() - a * (k.bottomRightCorner<6, 6>() + mu * Eigen::Matrix<cplx, 6, 6>::Identity());
    const Eigen::Matrix<cplx, 6, 4> gi_kgf = G.partialPivLu().solve(k.bottomLeftCorner<6, 4>());
    const Eigen::Matrix<cplx, 4, 4> schur = k.topLeftCorner<4, 4>()
                                          + mu * Eigen::Matrix<cplx, 4, 4>::Identity()
                                          + a * k.topRightCorner<4, 6>() * gi_kgf;
    Eigen::JacobiSVD<Eigen::Matrix<cplx, 4, 4>> svd(schur, Eigen::ComputeFullV);
    Vec4 z = svd.matrixV().col(3);
    z *= b / z[0];
    u.head<4>() = z;
    u.tail<6>() = a * gi_kgf * z;
    return u;
}

std::vector<Vec10> null_vector_series(const ModeParams& mode, int order)
{
    // With D = diag(0_4, 1_6) and A(1) = D - alpha (K + mu), order alpha^j of A n = 0 reads
    //   mhat_j = [K n_{j-1} + sum_k mu_k n_{j-1-k}]_g,
    //   (K_ff + mu_0) z_j = -K_fg mhat_j - sum_{k>=1} mu_k z_{j-k},   z_{j,1} = 0.
    const std::vector<cplx> mu = mu_series(mode, order + 1);
    const Mat10 k = khat_matrix(1.0, 0.0, mode);
    const Eigen::Matrix<cplx, 4, 4> kff = k.topLeftCorner<4, 4>() + mu[0] * Eigen::Matrix<cplx, 4, 4>::Identity();
    const Eigen::Matrix<cplx, 4, 3> red = kff.rightCols<3>();
    std::vector<Vec10> n(order + 1, Vec10::Zero());
    n[0].head<4>() << mode.beta, mode.gamma - mode.beta, mode.beta, -mode.beta;
    for (int j = 1; j <= order; ++j) {
        Vec10 rhs = k * n[j - 1];
        for (int q = 0; q <= j - 1; ++q) rhs += mu[q] * n[j - 1 - q];
        n[j].tail<6>() = rhs.tail<6>();
        Vec4 f = -k.topRightCorner<4, 6>() * n[j].tail<6>();
        for (int q = 1; q <= j; ++q) f -= mu[q] * n[j - q].head<4>();
        n[j][0] = 0.0;
        n[j].segment<3>(1) = red.colPivHouseholderQr().solve(f);
    }
    return n;
}

namespace {

OverdenseState make_state(double y, double s, const Vec10& u)
{
    OverdenseState st;
    st.y = y;
    st.z = u.head<4>();
    st.mhat = u.tail<6>();
    st.m = s * st.mhat;
    return st;
}

} // namespace

std::vector<OverdenseState> integrate_w2_plus(const ProfileTable& table, const ModeParams& mode,
                                              const ModelParams& model,
                                              const std::vector<double>& y_eval,
                                              OverdenseOptions opts)
{
    validate(mode);
    const double y0 = opts.y_start > 0.0 ? opts.y_start : default_y_start(table);
    for (double y : y_eval)
        if (y > y0) throw EvansError("domain", "integrate_w2_plus needs y_eval <= y_start");
    const cplx mu = mu_of(mode);

    Vec10 u0 = overdense_null_vector(mode, model);
    const double s0 = table.one_minus_xi(y0);
    if (opts.first_order_start && mode.alpha > 0.0) {
        const double h = 1e-5;
        const Mat10 ap = overdense_matrix(1.0 - h, h, mode, model, mu);
        const Mat10 am = overdense_matrix(1.0 + h, -h, mode, model, mu);
        const Mat10 a_inf = overdense_matrix(1.0, 0.0, mode, model, mu);
        const Vec10 rhs = -((ap - am) / (2.0 * h)) * u0;
        const Vec10 c1 = (a_inf + Mat10::Identity()).partialPivLu().solve(rhs);
        u0 += s0 * c1;
    }
    u0 *= opts.scale;

    // Sort descending, integrate once, then restore caller order.
    std::vector<std::size_t> order(y_eval.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return y_eval[i] > y_eval[j]; });
    std::vector<double> ys;
    for (std::size_t i : order) ys.push_back(y_eval[i]);

    std::function<Mat10(double)> a = [&](double y) {
        return overdense_matrix(table.xi(y), table.one_minus_xi(y), mode, model, mu);
    };
    std::vector<OverdenseState> out(y_eval.size());
    std::vector<double> ys_int;
    std::vector<std::size_t> idx_int;
    for (std::size_t k = 0; k < ys.size(); ++k) {
        if (ys[k] == y0) out[order[k]] = make_state(y0, s0, u0);
        else {
            ys_int.push_back(ys[k]);
            idx_int.push_back(order[k]);
        }
    }
    const auto sol = ode::integrate_linear<10>(a, u0, y0, ys_int, {opts.rtol, opts.atol});
    for (std::size_t k = 0; k < sol.size(); ++k)
        out[idx_int[k]] = make_state(ys_int[k], table.one_minus_xi(ys_int[k]), sol[k]);
    return out;
}

OverdenseState integrate_w2_plus(const ProfileTable& table, const ModeParams& mode,
                                 const ModelParams& model, double y_eval, OverdenseOptions opts)
{
    return integrate_w2_plus(table, mode, model, std::vector<double>{y_eval}, opts).front();
}

FirstOrder first_order_closed_forms(double xi, const ModeParams& mode, const ModelParams& model)
{
    if (!(xi > 0.0 && xi <= 1.0)) throw EvansError("domain", "first_order_closed_forms needs 0 < xi <= 1");
    const double b = mode.beta, nu = model.nu;
    const cplx g = mode.gamma;
    const double xn = std::pow(xi, nu);
    FirstOrder f;
    f.z1[0] = b * (b + g) * (xn - 1.0) / (nu * xn);
    f.z1[1] = (xn - 1.0) / (nu * xn);
    f.z1[2] = g * b * (1.0 - xn) / (nu * xn) + (b * b / (nu + 1.0)) * (1.0 - xn * xi) / (xn * xi);
    f.z1[3] = 0.0;
    if (xi == 1.0) return f;
    Vec10 w = Vec10::Zero();
    w.head<4>() << b, g - b, b, -b;
    ModeParams m0 = mode;
    m0.alpha = 0.0;
    using boost::math::quadrature::gauss_kronrod;
    for (int q = 0; q < 6; ++q) {
        auto part = [&](double eta, bool im) {
            const Mat10 k = khat_matrix(eta, 1.0 - eta, m0);
            const cplx v = (k.row(4 + q) * w)(0) * std::pow(eta, -nu - 1.0);
            return im ? v.imag() : v.real();
        };
        const double re = gauss_kronrod<double, 31>::integrate([&](double e) { return part(e, false); }, xi, 1.0, 15, 1e-13);
        const double im = gauss_kronrod<double, 31>::integrate([&](double e) { return part(e, true); }, xi, 1.0, 15, 1e-13);
        f.m1[q] = cplx(re, im);
    }
    return f;
}

std::vector<std::vector<OverdenseState>> alpha_expansion(const ProfileTable& table,
                                                         const ModeParams& mode,
                                                         const ModelParams& model, int order,
                                                         const std::vector<double>& y_eval,
                                                         double y_start)
{
    const int n = order + 1;
    const std::vector<cplx> mu = mu_series(mode, order);
    // Start on the expansion of the boundary null vector, so no boundary layer
    // is seeded at y_start.
    Eigen::VectorXcd u0 = Eigen::VectorXcd::Zero(10 * n);
    const std::vector<Vec10> nv = null_vector_series(mode, order);
    for (int j = 0; j < n; ++j) u0.segment<10>(10 * j) = nv[j];

    // Hierarchy: u_j' = D u_j - Khat u_{j-1} - sum_k mu_k u_{j-1-k}.
    using namespace boost::numeric::odeint;
    using State = std::vector<double>;
    State x(20 * n);
    Eigen::Map<Eigen::VectorXcd>(reinterpret_cast<cplx*>(x.data()), 10 * n) = u0;
    auto rhs = [&](const State& s, State& ds, double y) {
        const double xi = table.xi(y), om = table.one_minus_xi(y);
        const Mat10 k = khat_matrix(xi, om, mode);
        const double w = std::pow(xi, model.nu + 1.0);
        const cplx* u = reinterpret_cast<const cplx*>(s.data());
        cplx* du = reinterpret_cast<cplx*>(ds.data());
        for (int j = 0; j < n; ++j) {
            Eigen::Map<const Vec10> uj(u + 10 * j);
            Vec10 d = Vec10::Zero();
            d.tail<6>() = w * uj.tail<6>();
            if (j > 0) {
                d -= k * Eigen::Map<const Vec10>(u + 10 * (j - 1));
                for (int kk = 0; kk <= j - 1; ++kk) d -= mu[kk] * Eigen::Map<const Vec10>(u + 10 * (j - 1 - kk));
            }
            Eigen::Map<Vec10>(du + 10 * j) = d;
        }
    };
    std::vector<double> ts{y_start};
    std::vector<double> ys = y_eval;
    std::sort(ys.begin(), ys.end(), std::greater<>());
    ts.insert(ts.end(), ys.begin(), ys.end());
    std::vector<std::vector<OverdenseState>> tmp;
    auto obs = [&](const State& s, double y) {
        const cplx* u = reinterpret_cast<const cplx*>(s.data());
        std::vector<OverdenseState> row;
        for (int j = 0; j < n; ++j)
            row.push_back(make_state(y, table.one_minus_xi(y), Eigen::Map<const Vec10>(u + 10 * j)));
        tmp.push_back(row);
    };
    auto stepper = make_controlled(1e-14, 1e-12, runge_kutta_fehlberg78<State>());
    integrate_times(stepper, rhs, x, ts.begin(), ts.end(), -1e-3, obs);
    tmp.erase(tmp.begin());
    std::vector<std::vector<OverdenseState>> out(y_eval.size());
    for (std::size_t i = 0; i < y_eval.size(); ++i) {
        const auto it = std::find(ys.begin(), ys.end(), y_eval[i]);
        out[i] = tmp[std::distance(ys.begin(), it)];
    }
    return out;
}

double SeriesCoeffs::norm(int j) const
{
    double s = 0.0;
    for (const cplx& v : A[j - 1]) s += std::abs(v);
    for (const cplx& v : B[j - 1]) s += std::abs(v);
    return s;
}

SeriesCoeffs recurrence_coeffs(cplx r, const ModelParams& model, int J, SeriesVariant variant)
{
    if (J < 1) throw EvansError("validation", "recurrence needs J >= 1");
    const double nu = model.nu;
    SeriesCoeffs c;
    c.J = J;
    c.A.assign(J, {});
    c.B.assign(J, {});
    c.A[0] = {-(r + 1.0) / nu, 0.0, 1.0 / (nu + 1.0), 0.0};
    c.B[0] = {-1.0 / (nu + 1.0), r / (nu + 1.0), 0.0, 0.0, 0.0, 0.0};
    const cplx shift = variant == SeriesVariant::Shifted ? 1.0 + r : 0.0;
    for (int j = 1; j < J; ++j) {
        const auto& a = c.A[j - 1];
        const auto& b = c.B[j - 1];
        const double c0 = nu * (j + 1), c1 = c0 + 1.0, c2 = c0 + 2.0;
        auto& A = c.A[j];
        auto& B = c.B[j];
        A[0] = (a[2] - r * a[3] - b[2] - shift * a[0]) / c0;
        A[1] = (r * a[1] - a[2] - b[0] - b[4] - shift * a[1]) / c1;
        A[2] = (a[0] + a[1] + r * a[2] - a[3] - b[1] - b[5] - shift * a[2]) / c1;
        A[3] = (-a[2] + r * a[3] + b[2] - shift * a[3]) / c1;
        B[0] = (-r * b[0] - b[1] - b[3] - r * b[4] - a[0] + (r * r - 1.0) * a[1] - shift * b[0]) / c1;
        B[1] = (b[0] - r * b[1] + b[2] - r * b[5] + r * a[0] + (r * r - 1.0) * a[2] - shift * b[1]) / c1;
        B[2] = (b[1] - r * b[2] + b[5] + (1.0 - r * r) * a[3] - shift * b[2]) / c1;
        B[3] = (-b[0] + b[4] + r * a[1] + a[2] - shift * b[3]) / c2;
        B[4] = (b[3] - b[5] - a[3] - shift * b[4]) / c2;
        B[5] = (b[2] + b[4] + r * a[3] - shift * b[5]) / c2;
    }
    return c;
}

Vec10 abar_bbar(cplx zeta, double beta, cplx r, const ModelParams& model, double tol,
                SeriesVariant variant)
{
    const cplx x = beta * zeta;
    Vec10 out = Vec10::Zero();
    if (x == cplx(0.0)) return out;
    int J = 64;
    for (;;) {
        const SeriesCoeffs c = recurrence_coeffs(r, model, J, variant);
        out.setZero();
        cplx xp = 1.0;
        bool converged = false;
        for (int j = 1; j <= J; ++j) {
            xp *= x;
            Vec10 term;
            for (int p = 0; p < 4; ++p) term[p] = c.A[j - 1][p] * xp;
            for (int q = 0; q < 6; ++q) term[4 + q] = c.B[j - 1][q] * xp;
            out += term;
            if (j > 2 && term.cwiseAbs().maxCoeff() <= tol * std::max(1.0, out.cwiseAbs().maxCoeff())
                && std::abs(xp) * c.norm(j) < tol) {
                converged = true;
                break;
            }
        }
        if (converged || J >= 4096) break;
        J *= 2;
    }
    return out;
}

Mat5 b0_matrix(double xi, cplx r)
{
    Mat5 m = Mat5::Zero();
    m(0, 0) = -r;
    m(2, 0) = 1.0 / xi;
    m(3, 0) = 1.0;
    m(2, 1) = 1.0;
    m(0, 2) = xi;
    m(1, 2) = -1.0;
    m(4, 2) = 1.0;
    m(3, 3) = r;
    m(0, 3) = 1.0 - r * r;
    m(1, 3) = -1.0 / xi;
    m(2, 3) = r / xi;
    m(2, 4) = 1.0;
    m(3, 4) = -xi;
    m(0, 4) = r * xi;
    return m;
}

Vec10 lemma_ode_route(double x, cplx r, const ModelParams& model, SeriesVariant variant)
{
    const double nu = model.nu;
    const double delta[10] = {0, 1, 1, 1, 1, 1, 1, 2, 2, 2};
    Vec10 src;
    src << -(r + 1.0), 0.0, 1.0, 0.0, -1.0, r, 0.0, 0.0, 0.0, 0.0;
    const cplx shift = variant == SeriesVariant::Shifted ? 1.0 + r : 0.0;
    if (x == 0.0) return Vec10::Zero();

    // Augmented linear system: the last slot carries the constant 1 that
    // multiplies the source.
    using Mat11 = Eigen::Matrix<cplx, 11, 11>;
    using Vec11 = Eigen::Matrix<cplx, 11, 1>;
    std::function<Mat11(double)> a = [&](double xx) {
        const double xi = std::pow(xx, -1.0 / nu);
        const Mat10 l = lift2(b0_matrix(xi, r));
        Mat11 m = Mat11::Zero();
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 10; ++j) m(i, j) = l(i, j) * std::pow(xi, delta[i] - delta[j]) / nu;
            m(i, i) -= delta[i] / (nu * xx) + shift / nu;
            m(i, 10) = src[i] / nu;
        }
        return m;
    };
    const double x0 = std::min(1e-7, 1e-3 * x);
    Vec11 w0 = Vec11::Zero();
    for (int i = 0; i < 10; ++i) w0[i] = src[i] / (nu + delta[i]) * x0;
    w0[10] = 1.0;
    const auto w = ode::integrate_linear<11>(a, w0, x0, {x}, {1e-13, 1e-16});
    return w.front().head<10>();
}

double series_radius_estimate(const SeriesCoeffs& c)
{
    double r = 0.0;
    for (int j = 1; j < std::min(c.J, 6); ++j)
        if (c.norm(j) > 0.0) r = std::max(r, c.norm(j + 1) / c.norm(j));
    return r;
}

} // namespace evans
