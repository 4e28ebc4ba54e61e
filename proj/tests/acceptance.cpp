// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "evans/evans.hpp"
#include "evans/exterior.hpp"
#include "evans/fuchsian.hpp"
#include "evans/models.hpp"
#include "evans/overdense.hpp"
#include "evans/profile.hpp"
#include "evans/rootscan.hpp"
#include "evans/spectral.hpp"
#include "gen.hpp"

using namespace evans;

namespace {

const ModelParams kModel{2.5};

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > budget_s) {
        o.ok = false;
        o.detail += " [over budget]";
    }
    if (!o.ok) ++failures;
    std::printf("%s criterion %d (%s): %s (%.2f s of %.0f s)\n", o.ok ? "PASS" : "FAIL", id, title,
                o.detail.c_str(), dt, budget_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

const ProfileTable& table()
{
    static const ProfileTable t = build_default_profile(kModel);
    return t;
}

double slope(double a, double b) { return std::log10(a / b); }

} // namespace

int main()
{
    run(1, "profile anchors", 1.0, [] {
        const ProfileTable t = build_default_profile(kModel);
        const double nu = kModel.nu;
        const double anchor = std::abs(t.xi(0.0) - (nu + 1.0) / (nu + 2.0));
        const double tail = std::abs(t.xi(-1e6) * std::pow(nu * 1e6, 1.0 / nu) - 1.0);
        double lo = 1e300, hi = -1e300;
        for (double y = 20.0; y <= 40.0; y += 0.25) {
            const double c = t.one_minus_xi(y) * std::exp(y);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        const double drift = (hi - lo) / hi;
        return Outcome{anchor <= 1e-15 && tail <= 0.02 && drift <= 1e-6,
                       fmt("|xi(0)-7/9|=%.1e, tail dev %.3g, drift %.1e", anchor, tail, drift)};
    });

    run(2, "spectral exactness", 1.0, [] {
        test::Gen gen(1002);
        double res = 0.0, sum = 0.0;
        for (int n = 0; n < 100; ++n) {
            ModeParams m = gen.mode();
            const double xi = gen.uniform(0.01, 1.0);
            const Mat5 a = -m0_matrix(xi, m, kModel);
            const SpectralSet s = eigenstructure(xi, m, kModel);
            const auto lam = s.eigenvalues();
            const auto vec = s.eigenvectors();
            cplx tot = 0.0;
            for (int k = 0; k < 5; ++k) {
                res = std::max(res, (a * vec[k] - lam[k] * vec[k]).norm() / (vec[k].norm() * a.norm()));
                tot += lam[k];
            }
            sum = std::max(sum, std::abs(tot - (m.alpha * m.gamma * xi - std::pow(xi, kModel.nu))));
        }
        return Outcome{res <= 1e-10 && sum <= 1e-12, fmt("max residual/|M0| %.1e, max sum error %.1e", res, sum)};
    });

    run(3, "exterior kernel", 1.0, [] {
        test::Gen gen(1003);
        double leib = 0.0, det = 0.0;
        for (int n = 0; n < 1000; ++n) {
            const Mat5 a = gen.mat5();
            const Vec5 u = gen.vec5(), v = gen.vec5(), w = gen.vec5(), x = gen.vec5(), y = gen.vec5();
            const Vec10 lhs = lift2(a) * wedge2(u, v).c;
            const Vec10 rhs = wedge2(a * u, v).c + wedge2(u, a * v).c;
            leib = std::max(leib, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
            Mat5 m;
            m << u, v, w, x, y;
            const cplx d = m.determinant();
            det = std::max(det, std::abs(pair_top(wedge2(u, v), wedge3(w, x, y)) - d) / std::max(1.0, std::abs(d)));
        }
        Mat5 dg = Mat5::Zero();
        for (int i = 0; i < 5; ++i) dg(i, i) = i + 1.0;
        const Eigen::ComplexEigenSolver<Mat10> es(lift2(dg));
        std::vector<double> got, want;
        for (int i = 0; i < 10; ++i) got.push_back(es.eigenvalues()[i].real());
        for (int i = 1; i <= 5; ++i)
            for (int j = i + 1; j <= 5; ++j) want.push_back(i + j);
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        double diag = 0.0;
        for (int i = 0; i < 10; ++i) diag = std::max(diag, std::abs(got[i] - want[i]));
        return Outcome{leib <= 1e-12 && det <= 1e-12 && diag <= 1e-12,
                       fmt("Leibniz %.1e, determinant %.1e, diag spectrum %.1e", leib, det, diag)};
    });

    run(4, "discontinuity oracle", 1.0, [] {
        double worst = 0.0;
        bool wind = true;
        for (double xi0 : {0.3, 0.5, 0.7})
            for (double beta : {0.05, 0.1, 0.2}) {
                const DiscontinuityConfig cfg{xi0, beta, kModel.nu};
                const double g = growth_rate_closed(cfg);
                const auto root = poly_root_newton(cfg, cplx(g + 0.05, 0.02));
                worst = std::max(worst, root ? std::abs(*root - g) : 1e300);
                // Box around the root, clear of the zero at beta/xi0.
                const double half = std::min(0.1, 0.5 * std::abs(g - beta / xi0));
                const WindingResult w = winding_number([&](cplx z) { return evans_poly(cfg, z); },
                                                       {g - half, g + half, -half, half});
                wind = wind && w.winding == 1;
            }
        return Outcome{worst <= 1e-8 && wind, fmt("max |root - closed form| %.1e, windings all 1: %g", worst, wind)};
    });

    run(5, "series structure", 5.0, [] {
        bool init = true;
        double a12 = 0.0, ode = 0.0, cmax = 0.0;
        test::Gen gen(1005);
        for (int n = 0; n < 20; ++n) {
            const cplx r = gen.complex(2.0);
            const double nu = kModel.nu;
            const SeriesCoeffs c = recurrence_coeffs(r, kModel, 30, SeriesVariant::Printed);
            init = init && c.A[0][0] == -(r + 1.0) / nu && c.A[0][1] == 0.0 && c.A[0][2] == 1.0 / (nu + 1.0)
                && c.A[0][3] == 0.0 && c.B[0][0] == -1.0 / (nu + 1.0) && c.B[0][1] == r / (nu + 1.0);
            for (int q = 2; q < 6; ++q) init = init && c.B[0][q] == 0.0;
            a12 = std::max(a12, std::abs(c.A[1][0] - 1.0 / (2.0 * nu * (nu + 1.0))));
        }
        bool bound = true;
        for (auto variant : {SeriesVariant::Printed, SeriesVariant::Shifted})
            for (cplx r : {cplx(0.3), cplx(0.3, 0.3), cplx(2.0, 1.0)}) {
                const SeriesCoeffs c = recurrence_coeffs(r, kModel, 30, variant);
                std::vector<double> cj(31, 0.0);
                double lf = 0.0;
                for (int j = 1; j <= 30; ++j) {
                    lf += std::log(double(j));
                    cj[j] = kModel.nu * std::exp((std::log(c.norm(j)) + lf) / j);
                }
                const double C = *std::max_element(cj.begin() + 1, cj.end());
                cmax = std::max(cmax, C);
                // A single C: the tail does not require a larger constant than the head.
                bound = bound && *std::max_element(cj.begin() + 20, cj.end()) <= 1.05 * *std::max_element(cj.begin() + 1, cj.begin() + 11);
                for (double zeta : {0.1, 0.5, 1.0})
                    ode = std::max(ode, (abar_bbar(zeta, 1.0, r, kModel, 1e-16, variant)
                                         - lemma_ode_route(zeta, r, kModel, variant)).norm());
            }
        return Outcome{init && a12 <= 1e-15 && bound && ode <= 1e-8,
                       fmt("init exact %g, |A12 - 1/(2nu(nu+1))| %.1e, fitted C <= %.2f, series vs ODE %.1e", init, a12, cmax, ode)};
    });

    run(6, "Evans well-definedness", 60.0, [] {
        double worst = 0.0;
        bool reliable = true;
        for (double a : {0.05, 0.01})
            for (double b : {0.5, 1.0, 2.0})
                for (cplx g : {cplx(0.1), cplx(0.3, 0.3)}) {
                    const EvansResult r = evans::evans(table(), {a, b, g}, kModel);
                    worst = std::max(worst, r.max_relative_spread);
                    reliable = reliable && r.reliable && r.eval_points.size() >= 3;
                }
        return Outcome{worst <= 1e-6 && reliable, fmt("max relative spread %.1e over 12 points", worst)};
    });

    run(7, "no root in [0,1]x[-1,1]", 600.0, [] {
        const auto rep = verify_no_root(table(), {0.05, 0.01}, {1.0}, kModel, {0.0, 1.0, -1.0, 1.0});
        bool ok = true;
        std::string d;
        for (const auto& p : rep) {
            const bool margin = p.winding.min_abs > 1e3 * p.max_abs_spread;
            ok = ok && p.winding.winding == 0 && margin && p.all_reliable;
            d += fmt("alpha=%g: winding %g, min|Ev| %.3g vs spread %.1e; ", p.alpha, p.winding.winding,
                     p.winding.min_abs, p.max_abs_spread);
        }
        return Outcome{ok, d};
    });

    run(8, "alpha scaling", 300.0, [] {
        const cplx g(0.3, 0.3);
        const auto mo = model_solution(kModel, 1.0);
        const Vec10 mv = mo.as_wedge().c;
        const cplx e0 = evans_limit_alpha0(1.0, g, kModel, 1.0);
        std::vector<double> dz, de;
        for (double a : {1e-2, 1e-3, 1e-4}) {
            const ModeParams m{a, 1.0, g};
            dz.push_back((rl_at(table(), m, kModel, 1.0).as_wedge().c - mv).norm() / mv.norm());
            de.push_back(std::abs(evans::evans(table(), m, kModel).value - e0));
        }
        const double target = 1.0 / kModel.nu;
        bool ok = true;
        std::vector<double> s;
        for (int k = 0; k < 2; ++k) {
            s.push_back(slope(dz[k], dz[k + 1]));
            s.push_back(slope(de[k], de[k + 1]));
        }
        for (double v : s) ok = ok && std::abs(v - target) <= 0.15;
        return Outcome{ok, fmt("solution slopes %.3f, %.3f; Evans slopes %.3f, %.3f", s[0], s[2], s[1], s[3])};
    });

    run(9, "uniqueness under start doubling", 60.0, [] {
        const ModeParams m{0.01, 1.0, {0.3, 0.3}};
        const std::vector<double> ys{0.0, -50.0, -100.0};
        OverdenseOptions a, b;
        a.y_start = default_y_start(table());
        b.y_start = 2.0 * a.y_start;
        const auto sa = integrate_w2_plus(table(), m, kModel, ys, a);
        const auto sb = integrate_w2_plus(table(), m, kModel, ys, b);
        double od = 0.0;
        for (std::size_t k = 0; k < ys.size(); ++k) {
            Vec10 u, v;
            u << sa[k].z, sa[k].m;
            v << sb[k].z, sb[k].m;
            od = std::max(od, (u - v).norm() / u.norm());
        }
        FuchsOptions fa, fb;
        fb.T_start = 2.0 * fa.T_start;
        const std::vector<double> ts{1.0, 5.0, 20.0};
        const auto ma = full_solution(table(), m, kModel, ts, fa);
        const auto mb = full_solution(table(), m, kModel, ts, fb);
        double fu = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k)
            fu = std::max(fu, (ma[k].as_wedge().c - mb[k].as_wedge().c).norm() / ma[k].as_wedge().c.norm());
        return Outcome{od <= 1e-6 && fu <= 1e-6, fmt("overdense %.1e, Fuchsian %.1e", od, fu)};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
