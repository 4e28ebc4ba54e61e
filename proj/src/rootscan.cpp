#include "evans/rootscan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

namespace evans {

void validate(const GammaRegion& g, bool require_right_half)
{
    if (!(g.re_max > g.re_min && g.im_max > g.im_min))
        throw EvansError("validation", "gamma region must have positive extent");
    if (require_right_half && g.re_min < 0.0)
        throw EvansError("validation", "gamma region must satisfy re_min >= 0");
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn)
{
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

namespace {

// Perimeter parameter u in [0, 1) mapped counterclockwise from (re_min, im_min).
cplx perimeter(const GammaRegion& g, double u)
{
    const double w = g.re_max - g.re_min, h = g.im_max - g.im_min;
    const double len = 2.0 * (w + h);
    double d = u * len;
    if (d < w) return {g.re_min + d, g.im_min};
    d -= w;
    if (d < h) return {g.re_max, g.im_min + d};
    d -= h;
    if (d < w) return {g.re_max - d, g.im_max};
    d -= w;
    return {g.re_min, g.im_max - d};
}

} // namespace

WindingResult winding_number(const std::function<cplx(cplx)>& f, const GammaRegion& region,
                             const WindingOptions& opts)
{
    validate(region, false);
    // Initial samples include the four corners.
    const double w = region.re_max - region.re_min, h = region.im_max - region.im_min;
    const double len = 2.0 * (w + h);
    std::vector<double> us;
    for (int k = 0; k < opts.n0; ++k) us.push_back(double(k) / opts.n0);
    for (double c : {0.0, w / len, (w + h) / len, (2 * w + h) / len}) us.push_back(c);
    std::sort(us.begin(), us.end());
    us.erase(std::unique(us.begin(), us.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }), us.end());

    struct Node {
        double u;
        cplx v;
        int depth;
    };
    std::vector<Node> nodes(us.size());
    parallel_for(int(us.size()), opts.jobs, [&](int i) { nodes[i] = {us[i], f(perimeter(region, us[i])), 0}; });
    int evals = int(us.size());

    WindingResult res;
    auto dphase = [](cplx a, cplx b) { return std::arg(b / a); };
    for (;;) {
        // Segments i -> i+1 (cyclic) whose phase jump is too large.
        std::vector<int> refine;
        const int n = int(nodes.size());
        for (int i = 0; i < n; ++i) {
            const Node& a = nodes[i];
            const Node& b = nodes[(i + 1) % n];
            if (a.v == cplx(0.0) || b.v == cplx(0.0)) continue;
            if (std::abs(dphase(a.v, b.v)) > opts.phase_step) {
                if (std::max(a.depth, b.depth) >= opts.max_depth) res.resolved = false;
                else refine.push_back(i);
            }
        }
        if (refine.empty()) break;
        std::vector<Node> mids(refine.size());
        parallel_for(int(refine.size()), opts.jobs, [&](int k) {
            const int i = refine[k];
            const Node& a = nodes[i];
            const double ub = (i + 1 == n) ? nodes[0].u + 1.0 : nodes[i + 1].u;
            const double um = 0.5 * (a.u + ub);
            const double uw = um >= 1.0 ? um - 1.0 : um;
            mids[k] = {uw, f(perimeter(region, uw)), std::max(a.depth, nodes[(i + 1) % n].depth) + 1};
        });
        evals += int(mids.size());
        nodes.insert(nodes.end(), mids.begin(), mids.end());
        std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.u < b.u; });
    }

    res.evaluations = evals;
    res.min_abs = std::numeric_limits<double>::infinity();
    double total = 0.0;
    const int n = int(nodes.size());
    for (int i = 0; i < n; ++i) {
        const cplx v = nodes[i].v;
        res.points.push_back(perimeter(region, nodes[i].u));
        res.values.push_back(v);
        res.min_abs = std::min(res.min_abs, std::abs(v));
        res.max_abs = std::max(res.max_abs, std::abs(v));
        const cplx nv = nodes[(i + 1) % n].v;
        if (v != cplx(0.0) && nv != cplx(0.0)) total += dphase(v, nv);
    }
    if (!std::isfinite(res.min_abs) || res.min_abs <= opts.zero_abs || res.min_abs < opts.zero_rel * res.max_abs)
        throw EvansError("contour-zero", "f vanishes on or near the contour; shrink the region");
    // A phase jump that survives full bisection also marks a zero on the contour.
    if (!res.resolved)
        throw EvansError("contour-zero", "phase did not resolve at maximum depth; a zero lies on or near the contour");
    res.raw = total / (2.0 * std::numbers::pi);
    res.winding = int(std::lround(res.raw));
    return res;
}

std::vector<GridPointReport> verify_no_root(const ProfileTable& table, const std::vector<double>& alphas,
                                            const std::vector<double>& betas, const ModelParams& model,
                                            const GammaRegion& region, const WindingOptions& wopts,
                                            const EvansOptions& eopts)
{
    validate(region);
    std::vector<GridPointReport> out;
    for (double a : alphas)
        for (double b : betas) {
            GridPointReport rep;
            rep.alpha = a;
            rep.beta = b;
            std::mutex mu;
            auto f = [&](cplx g) {
                const EvansResult r = evans(table, ModeParams{a, b, g}, model, eopts);
                std::lock_guard<std::mutex> lk(mu);
                rep.max_spread = std::max(rep.max_spread, r.max_relative_spread);
                rep.max_abs_spread = std::max(rep.max_abs_spread, r.max_relative_spread * std::abs(r.value));
                rep.all_reliable = rep.all_reliable && r.reliable;
                return r.value;
            };
            rep.winding = winding_number(f, region, wopts);
            out.push_back(rep);
        }
    return out;
}

} // namespace evans
