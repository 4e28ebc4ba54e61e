#include "doctest.h"

#include <cmath>

#include "evans/evans.hpp"
#include "evans/profile.hpp"

using namespace evans;

namespace {

const ModelParams kModel{2.5};

const ProfileTable& table()
{
    static const ProfileTable t = build_default_profile(kModel);
    return t;
}

} // namespace

TEST_SUITE("evans") {

TEST_CASE("y-independence across the overlap")
{
    for (cplx g : {cplx(0.3, 0.0), cplx(0.3, 0.3), cplx(1.0, -0.8)}) {
        const ModeParams m{0.01, 1.0, g};
        EvansOptions o;
        o.n_points = 5;
        const EvansResult r = evans::evans(table(), m, kModel, o);
        CHECK(r.reliable);
        CHECK(r.max_relative_spread <= 1e-6);
        CHECK(std::abs(r.value) > 0.0);
        CHECK(r.eval_points.size() == 5);
        CHECK(r.window.t_min == o.t0);
        for (const auto& b : r.breakdown) CHECK(b.y == doctest::Approx(-b.t / (m.alpha * m.beta)));
    }
}

TEST_CASE("evans_at agrees with the assembled result")
{
    const ModeParams m{0.01, 1.0, {0.3, 0.3}};
    const EvansResult r = evans::evans(table(), m, kModel);
    const cplx v = evans_at(table(), m, kModel, 0.75);
    CHECK(std::abs(v - r.value) <= 1e-6 * std::abs(r.value));
    CHECK_THROWS_AS(evans_at(table(), m, kModel, 0.1), EvansError);
    CHECK_THROWS_AS(evans_at(table(), m, kModel, 1.0e3), EvansError);
}

TEST_CASE("conjugate symmetry")
{
    for (cplx g : {cplx(0.3, 0.3), cplx(0.8, -0.5)}) {
        const cplx a = evans::evans(table(), {0.01, 1.0, g}, kModel).value;
        const cplx b = evans::evans(table(), {0.01, 1.0, std::conj(g)}, kModel).value;
        CHECK(std::abs(b - std::conj(a)) <= 1e-9 * std::abs(a));
    }
    const cplx real_g = evans::evans(table(), {0.01, 1.0, {0.3, 0.0}}, kModel).value;
    CHECK(std::abs(real_g.imag()) <= 1e-10 * std::abs(real_g));
}

TEST_CASE("linearity in the overdense boundary data")
{
    const ModeParams m{0.01, 1.0, {0.3, 0.3}};
    EvansOptions o;
    o.overdense.scale = 3.0;
    const cplx a = evans::evans(table(), m, kModel).value;
    const cplx b = evans::evans(table(), m, kModel, o).value;
    CHECK(std::abs(b - 3.0 * a) <= 1e-12 * std::abs(b));
}

TEST_CASE("exponential factor tends to one")
{
    double prev = 1e9;
    for (double a : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const double d = std::abs(evans_exp_factor(table(), {a, 1.0, {0.3, 0.3}}, 0.5) - 1.0);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 5e-3);
}

TEST_CASE("alpha -> 0 limit does not depend on t_star")
{
    for (cplx g : {cplx(0.3, 0.3), cplx(0.1, 0.0)}) {
        const cplx a = evans_limit_alpha0(1.0, g, kModel, 1.0, SeriesVariant::Shifted);
        const cplx b = evans_limit_alpha0(1.0, g, kModel, 2.0, SeriesVariant::Shifted);
        CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
        // Without the mu(0) weight the printed recurrence drifts with t_star.
        const cplx pa = evans_limit_alpha0(1.0, g, kModel, 1.0, SeriesVariant::Printed);
        const cplx pb = evans_limit_alpha0(1.0, g, kModel, 2.0, SeriesVariant::Printed);
        MESSAGE("printed recurrence: relative change " << std::abs(pa - pb) / std::abs(pa));
        CHECK(std::abs(pa - pb) > 1e-3 * std::abs(pa));
    }
    // r = 1 makes the exponential prefactor 1.
    const double ts = 1.3;
    CHECK(std::exp((cplx(1.0) - 1.0) * ts) == cplx(1.0));
}

TEST_CASE("limit value is proportional to beta and free of gamma")
{
    const cplx k = evans_limit_alpha0(1.0, 0.3, kModel, 1.0);
    CHECK(std::abs(k) > 0.1);
    for (double b : {0.5, 2.0})
        for (cplx g : {cplx(0.0), cplx(0.5, 0.9), cplx(1.5, -1.0)}) {
            const cplx v = evans_limit_alpha0(b, g, kModel, 1.0);
            CHECK(std::abs(v - b * k) <= 1e-8 * std::abs(v));
        }
}

TEST_CASE("Ev approaches its limit like alpha^(1/nu)")
{
    const cplx g(0.3, 0.3);
    const cplx e0 = evans_limit_alpha0(1.0, g, kModel, 1.0);
    std::vector<double> d;
    for (double a : {1e-2, 1e-3, 1e-4}) d.push_back(std::abs(evans::evans(table(), {a, 1.0, g}, kModel).value - e0));
    for (int k = 0; k < 2; ++k) CHECK(std::log10(d[k] / d[k + 1]) == doctest::Approx(0.4).epsilon(0.375));
}

TEST_CASE("printed bracket signs break y-independence")
{
    const ModeParams m{0.01, 1.0, {0.3, 0.3}};
    EvansOptions o;
    const EvansResult d = evans::evans(table(), m, kModel, o);
    o.bracket = BracketVariant::Printed;
    const EvansResult p = evans::evans(table(), m, kModel, o);
    MESSAGE("spread derived " << d.max_relative_spread << " printed " << p.max_relative_spread);
    CHECK(p.max_relative_spread > 1e3 * d.max_relative_spread);
}

TEST_CASE("large-t diagnostic of the limit function")
{
    const LargeTFit f = limit_large_t_fit(1.0, {0.3, 0.3}, kModel, {2.0, 4.0, 8.0, 16.0}, SeriesVariant::Shifted);
    MESSAGE("fitted exponent " << f.exponent << " K " << f.K << " predicted factor " << f.predicted);
    CHECK(std::isfinite(f.exponent));
    CHECK(f.samples.size() == 4);
    CHECK(std::abs(f.predicted - (cplx(0.3, 0.3) - 1.0) * (-(cplx(0.3, 0.3) + 1.0) / 2.5 + 1.0 / 3.5)) < 1e-15);
}

TEST_CASE("validation")
{
    CHECK_THROWS_AS(evans::evans(table(), {0.0, 1.0, {0.3, 0.0}}, kModel), EvansError);
    EvansOptions o;
    o.n_points = 2;
    CHECK_THROWS_AS(evans::evans(table(), {0.01, 1.0, {0.3, 0.0}}, kModel, o), EvansError);
    CHECK_THROWS_AS(evans_limit_alpha0(1.0, 0.3, kModel, 0.0), EvansError);
}

} // TEST_SUITE
