#pragma once

#include <functional>
#include <vector>

#include "evans/evans.hpp"
#include "evans/types.hpp"

namespace evans {

struct GammaRegion {
    double re_min = 0.0, re_max = 1.0;
    double im_min = -1.0, im_max = 1.0;
};

void validate(const GammaRegion& region, bool require_right_half = true);

struct WindingOptions {
    int n0 = 64;                  // initial samples on the perimeter
    int max_depth = 12;           // bisection depth per initial segment
    double phase_step = 1.5707963267948966; // refine while |d arg| exceeds this
    double zero_rel = 1e-10;      // contour-zero if min|f| < zero_rel * max|f|
    double zero_abs = 0.0;        // or below this absolute floor
    int jobs = 1;
};

struct WindingResult {
    int winding = 0;
    double raw = 0.0;     // total phase change / 2 pi before snapping
    double min_abs = 0.0; // min |f| on contour samples
    double max_abs = 0.0;
    int evaluations = 0;
    bool resolved = true; // every segment met the phase threshold
    std::vector<cplx> points;
    std::vector<cplx> values;
};

// Runs fn(i) for i in [0, n) on up to jobs threads.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

WindingResult winding_number(const std::function<cplx(cplx)>& f, const GammaRegion& region,
                             const WindingOptions& opts = {});

struct GridPointReport {
    double alpha = 0.0, beta = 0.0;
    WindingResult winding;
    double max_spread = 0.0;     // max relative spread over contour evaluations
    double max_abs_spread = 0.0; // max relative spread * |Ev|
    bool all_reliable = true;
};

std::vector<GridPointReport> verify_no_root(const ProfileTable& table, const std::vector<double>& alphas,
                                            const std::vector<double>& betas, const ModelParams& model,
                                            const GammaRegion& region, const WindingOptions& wopts = {},
                                            const EvansOptions& eopts = {});

} // namespace evans
