// Batch front end: subcommands write <outdir>/<name>.csv plus a JSON sidecar.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/uuid/detail/sha1.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include "evans/evans.hpp"
#include "evans/models.hpp"
#include "evans/overdense.hpp"
#include "evans/profile.hpp"
#include "evans/rootscan.hpp"
#include "evans/spectral.hpp"
#include "evans/version.hpp"

using namespace evans;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

// Options that do not change results stay out of the config hash.
const std::vector<std::string> kUnhashed = {"outdir", "jobs", "profile-cache", "config", "help", "version"};

struct Global {
    double nu = 2.5;
    std::string outdir = ".";
    std::string profile_cache;
    int jobs = 1;
};

std::string sha1_hex(const std::string& s)
{
    boost::uuids::detail::sha1 h;
    h.process_bytes(s.data(), s.size());
    boost::uuids::detail::sha1::digest_type d;
    h.get_digest(d);
    std::ostringstream o;
    for (unsigned v : d) o << std::hex << std::setw(8) << std::setfill('0') << v;
    return o.str();
}

// Resolved option values of an app (given, from config, or default).
void collect(const CLI::App& app, json& out)
{
    for (const CLI::Option* opt : app.get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string name = opt->get_lnames().front();
        if (std::find(kUnhashed.begin(), kUnhashed.end(), name) != kUnhashed.end()) continue;
        std::string v;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) v += (v.empty() ? "" : ",") + r;
        } else {
            v = opt->get_default_str();
        }
        out[name] = v;
    }
}

class Output {
public:
    Output(const Global& g, const CLI::App& app, const CLI::App& sub) : g_(g), name_(sub.get_name())
    {
        collect(app, config_);
        json s;
        collect(sub, s);
        config_[name_] = s;
        std::filesystem::create_directories(g.outdir);
    }

    // Opens <outdir>/<stem>.csv and records it in the sidecar.
    std::ofstream csv(const std::string& stem)
    {
        const std::string path = (std::filesystem::path(g_.outdir) / (stem + ".csv")).string();
        std::ofstream f(path);
        if (!f) throw EvansError("io", "cannot write " + path);
        f << std::setprecision(17);
        files_.push_back(stem + ".csv");
        return f;
    }

    json& summary() { return summary_; }

    void finish() const
    {
        json meta;
        meta["schema"] = 1;
        meta["version"] = kVersion;
        meta["subcommand"] = name_;
        meta["config"] = config_;
        meta["config_hash"] = sha1_hex(config_.dump());
        meta["outputs"] = files_;
        meta["summary"] = summary_;
        const std::string path = (std::filesystem::path(g_.outdir) / (name_ + ".json")).string();
        std::ofstream f(path);
        if (!f) throw EvansError("io", "cannot write " + path);
        f << std::setw(2) << meta << "\n";
    }

private:
    const Global& g_;
    std::string name_;
    json config_;
    json summary_;
    std::vector<std::string> files_;
};

ProfileTable load_table(const Global& g)
{
    const ModelParams model{g.nu};
    if (!g.profile_cache.empty() && std::filesystem::exists(g.profile_cache)) {
        ProfileTable t = load_profile(g.profile_cache);
        if (t.nu == g.nu) return t;
        std::cerr << "profile cache " << g.profile_cache << " has nu = " << t.nu << ", rebuilding\n";
    }
    ProfileTable t = build_default_profile(model);
    if (!g.profile_cache.empty()) save_profile(t, g.profile_cache);
    return t;
}

cplx to_cplx(const std::vector<double>& v)
{
    if (v.size() == 1) return {v[0], 0.0};
    if (v.size() == 2) return {v[0], v[1]};
    throw EvansError("validation", "complex values are given as re or re,im");
}

GammaRegion to_region(const std::vector<double>& v)
{
    if (v.size() != 4) throw EvansError("validation", "--gamma-rect needs re_min,re_max,im_min,im_max");
    return {v[0], v[1], v[2], v[3]};
}

BracketVariant to_bracket(const std::string& s) { return s == "printed" ? BracketVariant::Printed : BracketVariant::Derived; }
SeriesVariant to_series(const std::string& s) { return s == "printed" ? SeriesVariant::Printed : SeriesVariant::Shifted; }

void put(std::ostream& o, cplx v) { o << ',' << v.real() << ',' << v.imag(); }

template <class V>
void put_vec(std::ostream& o, const V& v)
{
    for (int i = 0; i < v.size(); ++i) put(o, v[i]);
}

std::string cplx_header(const std::string& stem, int n)
{
    std::string h;
    for (int i = 1; i <= n; ++i) h += ",re_" + stem + std::to_string(i) + ",im_" + stem + std::to_string(i);
    return h;
}

struct EvansArgs {
    std::string bracket = "derived";
    double t0 = 0.5;
    double t_max = 0.0;
    int n_points = 3;
    double spread_tol = 1e-6;
    double T_start = 50.0;

    EvansOptions options() const
    {
        EvansOptions o;
        o.bracket = to_bracket(bracket);
        o.t0 = t0;
        o.t_max = t_max;
        o.n_points = n_points;
        o.spread_tol = spread_tol;
        o.fuchs.T_start = T_start;
        return o;
    }
};

void add_evans_args(CLI::App* s, EvansArgs& a)
{
    s->add_option("--bracket", a.bracket, "pairing signs")->check(CLI::IsMember({"derived", "printed"}));
    s->add_option("--t0", a.t0, "phase origin and left end of the overlap window");
    s->add_option("--t-max", a.t_max, "right end of the overlap window (0: automatic)");
    s->add_option("--n-points", a.n_points, "overlap evaluation points");
    s->add_option("--spread-tol", a.spread_tol, "reliability threshold on the relative spread");
    s->add_option("--T-start", a.T_start, "start of the Fuchsian integration");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Evans-function toolkit for the linearized ablation-front system"};
    app.option_defaults()->always_capture_default();
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file; command-line flags take precedence");
    app.set_version_flag("--version", std::string(kVersion));

    Global g;
    app.add_option("--nu", g.nu, "thermal conduction index");
    app.add_option("--outdir", g.outdir, "output directory");
    app.add_option("--profile-cache", g.profile_cache, "JSON profile cache (read if present, else written)");
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);

    // profile
    std::vector<double> p_range{-1000.0, 50.0};
    double p_tol = 1e-12;
    int p_n = 1051;
    auto* sp = app.add_subcommand("profile", "stationary profile xi(y)");
    sp->add_option("--range", p_range, "y_min,y_max")->delimiter(',')->expected(2);
    sp->add_option("--tol", p_tol, "integration tolerance");
    sp->add_option("--n", p_n, "output rows (y = 0 is always included)")->check(CLI::PositiveNumber);

    // spectrum
    double s_alpha = 0.1, s_beta = 1.0;
    std::vector<double> s_gamma{0.5, 0.0}, s_xi{0.01, 1.0};
    int s_n = 100;
    auto* ss = app.add_subcommand("spectrum", "eigenvalues of -M0 along xi");
    ss->add_option("--alpha", s_alpha);
    ss->add_option("--beta", s_beta);
    ss->add_option("--gamma", s_gamma, "re,im")->delimiter(',');
    ss->add_option("--xi-range", s_xi, "xi_min,xi_max")->delimiter(',')->expected(2);
    ss->add_option("--n", s_n)->check(CLI::Range(2, 1000000));

    // evans-eval
    double e_alpha = 0.01, e_beta = 1.0;
    std::vector<double> e_gamma{0.3, 0.0};
    int e_traj = 0;
    EvansArgs e_args;
    auto* se = app.add_subcommand("evans-eval", "Ev at one (alpha, beta, gamma)");
    se->add_option("--alpha", e_alpha);
    se->add_option("--beta", e_beta);
    se->add_option("--gamma", e_gamma, "re,im")->delimiter(',');
    se->add_option("--trajectory", e_traj, "also dump overdense and Fuchsian trajectories on this many points");
    add_evans_args(se, e_args);

    // evans-scan
    std::vector<double> c_alpha{0.01}, c_beta{1.0}, c_rect{0.0, 1.0, -1.0, 1.0};
    std::vector<int> c_grid{11, 21};
    EvansArgs c_args;
    auto* sc = app.add_subcommand("evans-scan", "Ev on a gamma grid");
    sc->add_option("--alpha", c_alpha, "list")->delimiter(',');
    sc->add_option("--beta", c_beta, "list")->delimiter(',');
    sc->add_option("--gamma-rect", c_rect, "re_min,re_max,im_min,im_max")->delimiter(',')->expected(4);
    sc->add_option("--grid", c_grid, "n_re,n_im")->delimiter(',')->expected(2);
    add_evans_args(sc, c_args);

    // winding
    std::vector<double> w_alpha{0.05, 0.01}, w_beta{1.0}, w_rect{0.0, 1.0, -1.0, 1.0};
    int w_n0 = 64, w_depth = 12;
    EvansArgs w_args;
    auto* sw = app.add_subcommand("winding", "argument-principle root count of Ev");
    sw->add_option("--alpha", w_alpha, "list")->delimiter(',');
    sw->add_option("--beta", w_beta, "list")->delimiter(',');
    sw->add_option("--gamma-rect", w_rect, "re_min,re_max,im_min,im_max")->delimiter(',')->expected(4);
    sw->add_option("--n0", w_n0, "initial contour samples")->check(CLI::Range(4, 1000000));
    sw->add_option("--max-depth", w_depth, "bisection depth")->check(CLI::Range(0, 40));
    add_evans_args(sw, w_args);

    // discontinuity
    std::vector<double> d_xi0{0.5}, d_beta{0.1}, d_phys;
    auto* sd = app.add_subcommand("discontinuity", "closed-form growth rate of the step profile");
    sd->add_option("--xi0", d_xi0, "list")->delimiter(',');
    sd->add_option("--beta", d_beta, "list")->delimiter(',');
    sd->add_option("--physical", d_phys, "k,L0,Va,g: beta from physical data, adds sigma")->delimiter(',')->expected(4);

    // series
    double r_beta = 1.0;
    std::vector<double> r_gamma{0.3, 0.0}, r_zeta{};
    int r_J = 30;
    std::string r_variant = "shifted";
    auto* sr = app.add_subcommand("series", "recurrence coefficients of the alpha -> 0 series");
    sr->add_option("--beta", r_beta);
    sr->add_option("--gamma", r_gamma, "re,im")->delimiter(',');
    sr->add_option("--J", r_J, "truncation order")->check(CLI::PositiveNumber);
    sr->add_option("--variant", r_variant)->check(CLI::IsMember({"printed", "shifted"}));
    sr->add_option("--zeta", r_zeta, "also sum the series at these zeta")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    const ModelParams model{g.nu};
    int status = 0;
    try {
        validate(model);
        if (*sp) {
            Output out(g, app, *sp);
            if (!(p_range[0] < 0.0 && p_range[1] > 0.0)) throw EvansError("validation", "--range must straddle 0");
            const ProfileTable t = build_profile(model, p_range[0], p_range[1], p_tol);
            if (!g.profile_cache.empty()) save_profile(t, g.profile_cache);
            std::vector<double> ys{0.0};
            for (int k = 0; k < p_n; ++k)
                ys.push_back(p_range[0] + (p_range[1] - p_range[0]) * (p_n == 1 ? 0.0 : double(k) / (p_n - 1)));
            std::sort(ys.begin(), ys.end());
            ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
            auto f = out.csv("profile");
            f << "y,xi,one_minus_xi\n";
            for (double y : ys) f << y << ',' << t.xi(y) << ',' << t.one_minus_xi(y) << '\n';
            out.summary() = {{"xi0", t.xi(0.0)}, {"c0", t.c0}, {"ystar", t.ystar}, {"samples", t.samples.size()}};
            out.finish();
        } else if (*ss) {
            Output out(g, app, *ss);
            const ModeParams m{s_alpha, s_beta, to_cplx(s_gamma)};
            validate(m);
            auto f = out.csv("spectrum");
            f << "xi";
            for (const char* n : {"lam0", "lam_a_plus", "lam_a_minus", "lam_plus", "lam_minus"})
                f << ",re_" << n << ",im_" << n;
            f << ",branch_flag\n";
            for (int k = 0; k < s_n; ++k) {
                const double xi = s_xi[0] + (s_xi[1] - s_xi[0]) * k / (s_n - 1);
                const SpectralSet s = eigenstructure(xi, m, model);
                f << xi;
                for (cplx l : s.eigenvalues()) put(f, l);
                f << ',' << int(s.branch_ambiguous) << '\n';
            }
            out.finish();
        } else if (*se) {
            Output out(g, app, *se);
            const ProfileTable t = load_table(g);
            const ModeParams m{e_alpha, e_beta, to_cplx(e_gamma)};
            const EvansOptions o = e_args.options();
            const EvansResult r = evans::evans(t, m, model, o);
            auto f = out.csv("evans-eval");
            f << "alpha,beta,re_gamma,im_gamma,re_ev,im_ev,spread\n";
            f << m.alpha << ',' << m.beta;
            put(f, m.gamma);
            put(f, r.value);
            f << ',' << r.max_relative_spread << '\n';
            auto b = out.csv("evans-eval-breakdown");
            b << "t,y,xi" << cplx_header("z", 4) << cplx_header("mhat", 6) << cplx_header("R", 4)
              << cplx_header("L", 6) << ",re_ev,im_ev\n";
            for (const auto& p : r.breakdown) {
                b << p.t << ',' << p.y << ',' << p.xi;
                put_vec(b, p.z);
                put_vec(b, p.mhat);
                put_vec(b, p.R);
                put_vec(b, p.L);
                put(b, p.value);
                b << '\n';
            }
            if (e_traj > 1) {
                const double ab = m.alpha * m.beta;
                const double y0 = default_y_start(t), y1 = -r.window.t_max / ab;
                std::vector<double> ys, ts;
                for (int k = 1; k <= e_traj; ++k) ys.push_back(y0 + (y1 - y0) * k / e_traj);
                const auto od = integrate_w2_plus(t, m, model, ys, o.overdense);
                auto fo = out.csv("overdense-trajectory");
                fo << "y" << cplx_header("z", 4) << cplx_header("m", 6) << '\n';
                for (const auto& s : od) {
                    fo << s.y;
                    put_vec(fo, s.z);
                    put_vec(fo, s.m);
                    fo << '\n';
                }
                const double ta = std::log(o.fuchs.T_start), tb = std::log(r.window.t_min);
                for (int k = 0; k < e_traj; ++k) ts.push_back(std::exp(ta + (tb - ta) * k / (e_traj - 1)));
                const auto fu = full_solution(t, m, model, ts, o.fuchs, o.t0);
                auto ff = out.csv("fuchs-trajectory");
                ff << "t" << cplx_header("R", 4) << cplx_header("L", 6) << ",re_log_weight,im_log_weight\n";
                for (const auto& s : fu) {
                    ff << s.t;
                    put_vec(ff, s.R);
                    put_vec(ff, s.L);
                    put(ff, s.log_weight);
                    ff << '\n';
                }
            }
            out.summary() = {{"reliable", r.reliable},
                             {"spread", r.max_relative_spread},
                             {"window", {r.window.t_min, r.window.t_max}},
                             {"window_clamped", r.window.clamped},
                             {"r_est", r.window.r_est},
                             {"value_c0", {r.value_c0.real(), r.value_c0.imag()}}};
            out.finish();
            if (!r.reliable) {
                std::cerr << "Ev spread " << r.max_relative_spread << " exceeds " << o.spread_tol << "\n";
                status = kExitNumerical;
            }
        } else if (*sc) {
            Output out(g, app, *sc);
            const GammaRegion reg = to_region(c_rect);
            validate(reg);
            if (c_grid[0] < 1 || c_grid[1] < 1) throw EvansError("validation", "--grid entries must be >= 1");
            const ProfileTable t = load_table(g);
            const EvansOptions o = c_args.options();
            struct Row {
                double alpha, beta;
                cplx gamma, value;
                double spread;
                bool reliable;
            };
            std::vector<Row> rows;
            auto axis = [](double lo, double hi, int n, int k) { return n == 1 ? lo : lo + (hi - lo) * k / (n - 1); };
            for (double a : c_alpha)
                for (double b : c_beta)
                    for (int i = 0; i < c_grid[0]; ++i)
                        for (int j = 0; j < c_grid[1]; ++j)
                            rows.push_back({a, b, {axis(reg.re_min, reg.re_max, c_grid[0], i), axis(reg.im_min, reg.im_max, c_grid[1], j)}, 0.0, 0.0, false});
            parallel_for(int(rows.size()), g.jobs, [&](int k) {
                const EvansResult r = evans::evans(t, {rows[k].alpha, rows[k].beta, rows[k].gamma}, model, o);
                rows[k].value = r.value;
                rows[k].spread = r.max_relative_spread;
                rows[k].reliable = r.reliable;
            });
            auto f = out.csv("evans-scan");
            f << "alpha,beta,re_gamma,im_gamma,re_ev,im_ev,spread\n";
            int unreliable = 0;
            for (const auto& r : rows) {
                f << r.alpha << ',' << r.beta;
                put(f, r.gamma);
                put(f, r.value);
                f << ',' << r.spread << '\n';
                unreliable += !r.reliable;
            }
            out.summary() = {{"points", rows.size()}, {"unreliable", unreliable}};
            out.finish();
            if (unreliable) status = kExitNumerical;
        } else if (*sw) {
            Output out(g, app, *sw);
            const GammaRegion reg = to_region(w_rect);
            validate(reg);
            const ProfileTable t = load_table(g);
            WindingOptions wo;
            wo.n0 = w_n0;
            wo.max_depth = w_depth;
            wo.jobs = g.jobs;
            const auto rep = verify_no_root(t, w_alpha, w_beta, model, reg, wo, w_args.options());
            auto f = out.csv("winding");
            f << "alpha,beta,winding,raw,min_abs_ev,max_relative_spread,max_abs_spread,evaluations,reliable\n";
            json pts = json::array();
            bool clean = true;
            for (const auto& p : rep) {
                f << p.alpha << ',' << p.beta << ',' << p.winding.winding << ',' << p.winding.raw << ','
                  << p.winding.min_abs << ',' << p.max_spread << ',' << p.max_abs_spread << ','
                  << p.winding.evaluations << ',' << int(p.all_reliable) << '\n';
                pts.push_back({{"alpha", p.alpha},
                               {"beta", p.beta},
                               {"winding", p.winding.winding},
                               {"min_abs_ev", p.winding.min_abs},
                               {"max_relative_spread", p.max_spread},
                               {"max_abs_spread", p.max_abs_spread},
                               {"reliable", p.all_reliable}});
                clean = clean && p.all_reliable;
            }
            out.summary() = {{"region", w_rect}, {"points", pts}};
            out.finish();
            if (!clean) status = kExitNumerical;
        } else if (*sd) {
            Output out(g, app, *sd);
            std::vector<double> betas = d_beta;
            PhysicalParams phys;
            if (!d_phys.empty()) {
                phys = {d_phys[0], d_phys[1], d_phys[2], d_phys[3]};
                if (!(phys.k > 0 && phys.L0 > 0 && phys.Va > 0 && phys.g > 0))
                    throw EvansError("validation", "--physical entries must be positive");
                betas = {params_from_physical(phys).beta};
            }
            auto f = out.csv("discontinuity");
            f << "xi0,beta,gamma,re_gamma_root,im_gamma_root,positive" << (d_phys.empty() ? "" : ",sigma") << '\n';
            json regions = json::object();
            for (double b : betas) {
                json iv = json::array();
                for (const auto& [lo, hi] : positivity_region(b)) iv.push_back({lo, hi});
                regions[std::to_string(b)] = iv;
                for (double x : d_xi0) {
                    const DiscontinuityConfig cfg{x, b, g.nu};
                    const double gc = growth_rate_closed(cfg);
                    const auto root = poly_root_newton(cfg, cplx(gc + 0.05, 0.02));
                    const cplx rv = root.value_or(cplx(NAN, NAN));
                    f << x << ',' << b << ',' << gc;
                    put(f, rv);
                    f << ',' << int(gc > 0.0);
                    if (!d_phys.empty()) f << ',' << growth_rate_physical(x, phys).sigma;
                    f << '\n';
                }
            }
            out.summary() = {{"positivity_region", regions}};
            out.finish();
        } else if (*sr) {
            Output out(g, app, *sr);
            if (!(r_beta > 0.0)) throw EvansError("validation", "--beta must be > 0");
            const cplx r = to_cplx(r_gamma) / r_beta;
            const SeriesVariant v = to_series(r_variant);
            const SeriesCoeffs c = recurrence_coeffs(r, model, r_J, v);
            auto f = out.csv("series");
            f << "j,norm" << cplx_header("A", 4) << cplx_header("B", 6) << '\n';
            for (int j = 1; j <= r_J; ++j) {
                f << j << ',' << c.norm(j);
                for (cplx a : c.A[j - 1]) put(f, a);
                for (cplx b : c.B[j - 1]) put(f, b);
                f << '\n';
            }
            if (!r_zeta.empty()) {
                auto z = out.csv("series-sum");
                z << "zeta" << cplx_header("A", 4) << cplx_header("B", 6) << '\n';
                for (double zeta : r_zeta) {
                    z << zeta;
                    put_vec(z, abar_bbar(zeta, r_beta, r, model, 1e-16, v));
                    z << '\n';
                }
            }
            out.summary() = {{"r", {r.real(), r.imag()}}, {"r_est", series_radius_estimate(c)}};
            out.finish();
        }
    } catch (const EvansError& e) {
        std::cerr << "error: " << e.what() << "\n";
        static const std::vector<std::string> input_tags = {"validation", "domain", "prefactor-pole",
                                                            "out-of-overlap", "io"};
        const bool input = std::find(input_tags.begin(), input_tags.end(), e.tag()) != input_tags.end();
        return input ? kExitValidation : kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return status;
}
