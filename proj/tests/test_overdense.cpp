#include "doctest.h"

#include <chrono>
#include <cmath>

#include "evans/exterior.hpp"
#include "evans/overdense.hpp"
#include "evans/profile.hpp"
#include "evans/spectral.hpp"
#include "gen.hpp"

using namespace evans;

namespace {

const ModelParams kModel{2.5};

const ProfileTable& table()
{
    static const ProfileTable t = build_default_profile(kModel);
    return t;
}

// y with xi(y) = x, by bisection on the table.
double y_of_xi(double x)
{
    double lo = -50.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (table().xi(mid) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Vec10 stack(const OverdenseState& s)
{
    Vec10 u;
    u << s.z, s.m;
    return u;
}

} // namespace

TEST_SUITE("overdense") {

TEST_CASE("Khat equals the conjugated lift of B and is regular")
{
    test::Gen gen(41);
    for (int n = 0; n < 50; ++n) {
        const ModeParams m = gen.mode();
        const double xi = gen.uniform(0.05, 0.98);
        Mat10 s = Mat10::Identity();
        for (int i = 4; i < 10; ++i) s(i, i) = 1.0 - xi;
        const Mat10 want = s.inverse() * lift2(b_matrix(xi, m)) * s;
        const Mat10 k = khat_matrix(xi, 1.0 - xi, m);
        CHECK((k - want).norm() <= 1e-11 * want.norm());
        const KhatDefect d = khat_defect(xi, m);
        CHECK(d.c_ff == 0.0);
        CHECK(d.a_gf == 0.0);
        CHECK(d.c_gf == 0.0);
        CHECK(d.c_gg == 0.0);
        CHECK(khat_matrix(1.0, 0.0, m).allFinite());
    }
}

TEST_CASE("boundary null vector")
{
    test::Gen gen(42);
    for (int n = 0; n < 30; ++n) {
        const ModeParams m = gen.mode(0.1);
        const Vec10 u = overdense_null_vector(m, kModel);
        const Mat10 a = overdense_matrix(1.0, 0.0, m, kModel, mu_of(m));
        CHECK((a * u).norm() <= 1e-12 * std::max(1.0, a.norm()) * u.norm());
        CHECK(std::abs(u[0] - m.beta) < 1e-14);
    }
    const ModeParams m{0.0, 1.2, {0.4, 0.1}};
    const Vec10 u = overdense_null_vector(m, kModel);
    CHECK(std::abs(u[1] - (m.gamma - m.beta)) == 0.0);
    CHECK(u.tail<6>().norm() == 0.0);
}

TEST_CASE("null-vector series reproduces the alpha dependence")
{
    const ModeParams base{0.0, 1.0, {0.3, 0.2}};
    const std::vector<Vec10> nv = null_vector_series(base, 4);
    double prev = 0.0;
    for (double a : {1e-2, 5e-3, 2.5e-3}) {
        ModeParams m = base;
        m.alpha = a;
        Vec10 sum = Vec10::Zero();
        double ap = 1.0;
        for (const auto& v : nv) {
            sum += ap * v;
            ap *= a;
        }
        const double err = (overdense_null_vector(m, kModel) - sum).norm();
        if (prev > 0.0) CHECK(prev / err > 16.0); // fifth order
        prev = err;
    }
}

TEST_CASE("mu series")
{
    const ModeParams base{0.0, 0.8, {0.5, -0.3}};
    const std::vector<cplx> c = mu_series(base, 4);
    CHECK(std::abs(c[0] - (-base.beta - base.gamma)) < 1e-15);
    double prev = 0.0;
    for (double a : {2e-2, 1e-2, 5e-3}) {
        ModeParams m = base;
        m.alpha = a;
        cplx sum = 0.0;
        double ap = 1.0;
        for (auto v : c) {
            sum += ap * v;
            ap *= a;
        }
        const double err = std::abs(mu_of(m) - sum);
        if (prev > 0.0) CHECK(prev / err > 24.0);
        prev = err;
    }
}

TEST_CASE("initial data and the alpha = 0 constant solution")
{
    const ModeParams m{0.02, 1.0, {0.3, 0.1}};
    OverdenseOptions o;
    const double y0 = default_y_start(table());
    CHECK(table().one_minus_xi(y0) == doctest::Approx(1e-8).epsilon(1e-9));
    o.y_start = y0;
    o.first_order_start = false;
    const OverdenseState s = integrate_w2_plus(table(), m, kModel, y0, o);
    Vec10 u;
    u << s.z, s.mhat;
    CHECK((u - overdense_null_vector(m, kModel)).norm() == 0.0);

    const ModeParams m0{0.0, 1.0, {0.3, 0.1}};
    const auto path = integrate_w2_plus(table(), m0, kModel, std::vector<double>{5.0, 0.0, -3.0});
    for (const auto& p : path) {
        Vec4 w;
        w << 1.0, m0.gamma - 1.0, 1.0, -1.0;
        CHECK((p.z - w).norm() < 1e-13);
        CHECK(p.m.norm() < 1e-13);
    }
    CHECK_THROWS_AS(integrate_w2_plus(table(), m, kModel, y0 + 1.0, o), EvansError);
}

TEST_CASE("first-order closed forms")
{
    const ModeParams m{0.0, 1.0, {0.5, 0.0}};
    const FirstOrder f = first_order_closed_forms(0.5, m, kModel);
    CHECK(f.z1[1].real() == doctest::Approx((std::pow(0.5, 2.5) - 1.0) / (2.5 * std::pow(0.5, 2.5))));
    CHECK(f.z1[1].real() == doctest::Approx(-1.862742).epsilon(1e-6));
    CHECK(f.z1[3] == cplx(0.0));
    const FirstOrder one = first_order_closed_forms(1.0, m, kModel);
    CHECK(one.z1.norm() == 0.0);
    CHECK(one.m1.norm() == 0.0);
}

TEST_CASE("first-order closed forms agree with the integrated hierarchy")
{
    const ModeParams m{0.0, 1.0, {0.3, 0.2}};
    const std::vector<double> xs{0.9, 0.7, 0.5};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(y_of_xi(x));
    const auto ex = alpha_expansion(table(), m, kModel, 1, ys);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const FirstOrder f = first_order_closed_forms(table().xi(ys[i]), m, kModel);
        MESSAGE("xi=" << xs[i] << " |z1 - closed| = " << (ex[i][1].z - f.z1).norm()
                      << " |m1 - quadrature| = " << (ex[i][1].m - f.m1).norm());
        CHECK(std::abs(ex[i][1].z[0] - f.z1[0]) < 1e-9);
        CHECK(std::abs(ex[i][1].z[3] - f.z1[3]) < 1e-9);
    }
}

TEST_CASE("order-alpha slope of z1 at xi = 0.9")
{
    const double y = y_of_xi(0.9);
    const double xn = std::pow(table().xi(y), 2.5);
    double prev = 0.0;
    for (double a : {4e-3, 2e-3, 1e-3}) {
        const ModeParams m{a, 1.0, {0.3, 0.0}};
        const OverdenseState s = integrate_w2_plus(table(), m, kModel, y);
        const cplx want = 1.0 - a * (1.0 * (1.0 + m.gamma) / 2.5) * (1.0 - xn) / xn;
        const double err = std::abs(s.z[0] - want);
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
        prev = err;
    }
}

TEST_CASE("series in alpha against integration, K stable under halving")
{
    const ModeParams base{0.0, 1.0, {0.3, 0.2}};
    std::vector<double> ys;
    for (double x : {0.5, 0.7, 0.9}) ys.push_back(y_of_xi(x));
    const auto ex = alpha_expansion(table(), base, kModel, 1, ys);
    std::vector<double> ks;
    for (double a : {1e-2, 5e-3, 2.5e-3}) {
        ModeParams m = base;
        m.alpha = a;
        const auto sol = integrate_w2_plus(table(), m, kModel, ys);
        double k = 0.0;
        for (std::size_t i = 0; i < ys.size(); ++i)
            k = std::max(k, (stack(sol[i]) - stack(ex[i][0]) - a * stack(ex[i][1])).norm() / (a * a));
        ks.push_back(k);
    }
    for (double k : ks) MESSAGE("K = " << k);
    CHECK(ks[1] / ks[0] == doctest::Approx(1.0).epsilon(0.1));
    CHECK(ks[2] / ks[1] == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("coefficient functions vanish like (1 - xi) with one R")
{
    const ModeParams m{0.0, 1.0, {0.3, 0.2}};
    std::vector<double> ys;
    for (double s : {0.3, 0.1, 1e-2, 1e-3, 1e-5}) ys.push_back(y_of_xi(1.0 - s));
    const int order = 6;
    const auto ex = alpha_expansion(table(), m, kModel, order, ys);
    std::vector<double> rj(order + 1, 0.0);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double s = table().one_minus_xi(ys[i]);
        for (int j = 1; j <= order; ++j) rj[j] = std::max(rj[j], std::pow(ex[i][j].z.cwiseAbs().maxCoeff() / s, 1.0 / j));
    }
    const double R = *std::max_element(rj.begin(), rj.end());
    MESSAGE("fitted R = " << R);
    for (int j = 2; j <= order; ++j) CHECK(rj[j] <= R);
    CHECK(R < 20.0);
    // Later orders do not need a larger R than the early ones.
    CHECK(std::max({rj[4], rj[5], rj[6]}) <= 1.05 * std::max({rj[1], rj[2], rj[3]}));
}

TEST_CASE("moving y_start by 5 changes the state by O(1 - xi(y_start))")
{
    const ModeParams m{0.03, 1.0, {0.3, 0.2}};
    const double y0 = default_y_start(table());
    const std::vector<double> ys{2.0, 0.0, -5.0};
    OverdenseOptions a, b;
    a.y_start = y0;
    b.y_start = y0 + 5.0;
    const auto sa = integrate_w2_plus(table(), m, kModel, ys, a);
    const auto sb = integrate_w2_plus(table(), m, kModel, ys, b);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double d = (stack(sa[i]) - stack(sb[i])).norm() / stack(sa[i]).norm();
        CHECK(d <= 10.0 * table().one_minus_xi(y0));
    }
}

TEST_CASE("linearity in the boundary scale")
{
    const ModeParams m{0.03, 1.0, {0.3, 0.2}};
    OverdenseOptions o;
    o.scale = cplx(2.0, -1.0).real();
    const OverdenseState a = integrate_w2_plus(table(), m, kModel, -4.0);
    const OverdenseState b = integrate_w2_plus(table(), m, kModel, -4.0, o);
    CHECK((stack(b) - 2.0 * stack(a)).norm() <= 1e-12 * stack(b).norm());
}

TEST_CASE("recurrence initial data and the second coefficient")
{
    test::Gen gen(43);
    for (int n = 0; n < 20; ++n) {
        const cplx r = gen.complex(2.0);
        for (const double nu : {1.5, 2.5, 4.0}) {
            const SeriesCoeffs c = recurrence_coeffs(r, {nu}, 3, SeriesVariant::Printed);
            CHECK(c.A[0][0] == -(r + 1.0) / nu);
            CHECK(c.A[0][1] == cplx(0.0));
            CHECK(c.A[0][2] == cplx(1.0 / (nu + 1.0)));
            CHECK(c.A[0][3] == cplx(0.0));
            CHECK(c.B[0][0] == cplx(-1.0 / (nu + 1.0)));
            CHECK(c.B[0][1] == r / (nu + 1.0));
            for (int q = 2; q < 6; ++q) CHECK(c.B[0][q] == cplx(0.0));
            CHECK(std::abs(c.A[1][0] - 1.0 / (2.0 * nu * (nu + 1.0))) < 1e-16);
        }
    }
    CHECK(std::abs(recurrence_coeffs(0.3, kModel, 2).A[1][0] - 0.0571429) < 1e-7);
    CHECK_THROWS_AS(recurrence_coeffs(0.3, kModel, 0), EvansError);
}

TEST_CASE("factorial bound with a single fitted C")
{
    for (auto variant : {SeriesVariant::Printed, SeriesVariant::Shifted})
        for (cplx r : {cplx(0.1), cplx(0.3, 0.3), cplx(1.0, -1.0), cplx(2.0, 1.0)}) {
            const SeriesCoeffs c = recurrence_coeffs(r, kModel, 30, variant);
            std::vector<double> cj(31, 0.0);
            double lf = 0.0;
            for (int j = 1; j <= 30; ++j) {
                lf += std::log(double(j));
                cj[j] = kModel.nu * std::exp((std::log(c.norm(j)) + lf) / j);
            }
            const double C = *std::max_element(cj.begin(), cj.end());
            double lfj = 0.0;
            for (int j = 1; j <= 30; ++j) {
                lfj += std::log(double(j));
                CHECK(std::log(c.norm(j)) <= j * std::log(C / kModel.nu) - lfj + 1e-12);
            }
            // The late coefficients do not push C up.
            CHECK(*std::max_element(cj.begin() + 20, cj.end()) <= 1.05 * *std::max_element(cj.begin() + 1, cj.begin() + 11));
        }
}

TEST_CASE("series route equals the ODE route")
{
    const auto start = std::chrono::steady_clock::now();
    for (auto variant : {SeriesVariant::Printed, SeriesVariant::Shifted})
        for (cplx r : {cplx(0.3), cplx(0.3, 0.3), cplx(2.0, 1.0)})
            for (double zeta : {0.1, 0.5, 1.0}) {
                const Vec10 s = abar_bbar(zeta, 1.0, r, kModel, 1e-16, variant);
                const Vec10 o = lemma_ode_route(zeta, r, kModel, variant);
                CHECK((s - o).norm() <= 1e-8);
            }
    CHECK(abar_bbar(0.0, 1.0, 0.3, kModel).norm() == 0.0);
    // d/dzeta at 0 of the first component is beta A_{1,1}.
    const double h = 1e-7, beta = 1.3;
    const cplx r = 0.4;
    const cplx d = abar_bbar(h, beta, r, kModel)[0] / h;
    CHECK(std::abs(d - beta * (-(r + 1.0) / kModel.nu)) < 1e-6);
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 5.0);
}

TEST_CASE("first-order m quadrature obeys the primitive bound")
{
    const ModeParams m{0.0, 1.0, {0.3, 0.2}};
    ModeParams m0 = m;
    Vec10 w = Vec10::Zero();
    w.head<4>() << 1.0, m.gamma - 1.0, 1.0, -1.0;
    for (double xi : {0.3, 0.6, 0.9}) {
        double sup = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double e = xi + (1.0 - xi) * k / 200.0;
            sup = std::max(sup, (khat_matrix(e, 1.0 - e, m0).bottomLeftCorner<6, 4>() * w.head<4>()).cwiseAbs().maxCoeff());
        }
        const FirstOrder f = first_order_closed_forms(xi, m, kModel);
        CHECK(f.m1.cwiseAbs().maxCoeff() <= (1.0 - xi) / std::pow(xi, kModel.nu + 1.0) * sup * (1.0 + 1e-9));
    }
}

} // TEST_SUITE
