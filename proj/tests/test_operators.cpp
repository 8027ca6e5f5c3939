#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "parawt/error.hpp"
#include "parawt/family.hpp"
#include "parawt/fields.hpp"
#include "parawt/operators.hpp"
#include "parawt/random.hpp"

using namespace parawt;

namespace
{

GridSpec grid2(int nx, int nt, double hx, double ht, double ox = 0, double ot = 0)
{
    return GridSpec::make(1, {nx, nt, 1}, {ox, ot, 0}, hx, ht);
}

MaximalConfig exhaustive_cfg(double gamma, double beta, Direction d = Direction::forward)
{
    MaximalConfig c;
    c.gamma = gamma;
    c.beta = beta;
    c.direction = d;
    c.family = FamilySpec::exhaustive();
    return c;
}

SampledField single_cell(GridSpec const& g, std::array<int, kMaxAxes> idx)
{
    SampledField f(g, 0.0);
    f[g.linear(idx)] = 1.0;
    return f;
}

}  // namespace

TEST_CASE("maximal of a constant field is the constant")
{
    GridSpec g = grid2(12, 24, 0.5, 0.125);
    for (double gamma : {0.0, 0.5})
        for (bool centered : {false, true})
        {
            MaximalConfig c = exhaustive_cfg(gamma, 0.0);
            c.centered = centered;
            MaximalResult m = maximal(SampledField(g, 3.25), 2.0, c);
            std::size_t reached = 0;
            for (std::size_t i = 0; i < m.value.size(); ++i)
            {
                if (!m.admissible[i])
                {
                    CHECK(m.value[i] == 0.0);
                    continue;
                }
                ++reached;
                CHECK(m.value[i] == doctest::Approx(3.25).epsilon(1e-14));
            }
            CHECK(reached > 0);
        }
}

TEST_CASE("indicator of an upper part attains the cap on the lower part")
{
    GridSpec g = grid2(16, 16, 0.25, 0.0625);
    ParabolicRectangle R0 = make_rectangle(Point::make(1, {2.0, 0.0}, 0.5), 0.5, 2.0);
    SampledField f = indicator(g, upper_part(R0, 0.5));
    MaximalResult m = maximal(f, 2.0, exhaustive_cfg(0.5, 0.0));
    Box lo = lower_part(R0, 0.5);
    int seen = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        CHECK(m.value[i] <= 1.0 + 1e-15);
        if (lo.contains(g.cell_center(g.unravel(i))))
        {
            CHECK(m.value[i] == 1.0);
            ++seen;
        }
    }
    CHECK(seen > 0);
}

TEST_CASE("uncentered maximal equals the brute-force oracle on an 8x8 grid")
{
    GridSpec g = grid2(8, 8, 0.5, 0.125);
    CounterRng rng(41, "operators-oracle");
    auto rects = oracle::aligned_rectangles(g, 2.0, 0.5);
    for (int k = 0; k < 3; ++k)
    {
        SampledField f(g);
        for (auto& v : f.values)
            v = static_cast<double>(rng.integer(-4, 9));
        SampledField expect = oracle::maximal_forward(f, rects, 0.5, 0.25);
        MaximalResult m = maximal(f, 2.0, exhaustive_cfg(0.5, 0.25));
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(m.value[i] == doctest::Approx(expect[i]).epsilon(1e-14));
    }
}

TEST_CASE("truncation removes small rectangles")
{
    GridSpec g = grid2(8, 16, 0.5, 0.125);
    CounterRng rng(42, "operators-trunc");
    SampledField f = random_noise(g, rng, g.window(), 1.0, false);
    MaximalConfig c = exhaustive_cfg(0.25, 0.0);
    MaximalResult full = maximal(f, 2.0, c);
    c.min_scale = 0.75;
    MaximalResult trunc = maximal(f, 2.0, c);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(trunc.value[i] <= full.value[i]);
}

TEST_CASE("centered versus shifted constant")
{
    GridSpec g = grid2(16, 64, 0.25, 0.0625);
    std::vector<double> ladder{0.25, 0.5, 0.75};
    CounterRng rng(43, "operators-shift");
    SampledField f = random_noise(g, rng, g.window(), 1.0, false);
    ShiftedBoundReport r = centered_vs_shifted_bound(f, 2.0, 0.5, 0.25, ladder);
    CHECK(r.K == doctest::Approx(std::pow(0.5 / 0.875, -0.75)).epsilon(1e-14));
    CHECK(r.K == doctest::Approx(1.521).epsilon(1e-3));
    CHECK(r.cells_checked > 0);
    CHECK(r.violations == 0);

    ShiftedBoundReport c = centered_vs_shifted_bound(SampledField(g, 2.0), 2.0, 0.5, 0.25, ladder);
    CHECK(c.max_ratio <= c.K * (1 + 1e-12));

    ShiftedBoundReport b0 = centered_vs_shifted_bound(f, 2.0, 0.5, 0.0, ladder);
    CHECK(b0.K == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(b0.violations == 0);
}

TEST_CASE("fractional integral")
{
    GridSpec g = grid2(16, 32, 0.25, 0.0625);
    IntegralConfig cfg;
    cfg.gamma = 0.25;
    cfg.beta = 0.5;
    SampledField zero = fractional_integral(SampledField(g, 0.0), 2.0, cfg);
    for (double v : zero.values)
        CHECK(v == 0.0);

    // Source cell at offset (+4, +20) cells from the evaluation cell: y = 1,
    // s = 1.25, inside the forward cone for γ = 0.25.
    SampledField f = single_cell(g, {8, 25, 0});
    SampledField out = fractional_integral(f, 2.0, cfg);
    double d = std::max(1.0, std::sqrt(1.25));
    double expect = g.cell_volume() * std::pow(d, -3.0 * 0.5);
    CHECK(out.at({4, 5, 0}) == doctest::Approx(expect).epsilon(1e-13));
    // Source outside the cone contributes nothing.
    CHECK(out.at({8, 26, 0}) == 0.0);
    CHECK(out.at({0, 24, 0}) == 0.0);

    CHECK_THROWS_AS(
        [&] {
            IntegralConfig bad = cfg;
            bad.beta = 1.0;
            fractional_integral(f, 2.0, bad);
        }(),
        Error);
}

TEST_CASE("fractional integral is translation covariant")
{
    GridSpec g = grid2(16, 32, 0.25, 0.0625, -2.0, 0.0);
    IntegralConfig cfg;
    cfg.gamma = 0.5;
    cfg.beta = 0.4;
    SampledField f = sample(g, {Bump{Point::make(1, {-1.0, 0.0}, 0.6), 0.4, 0.2, 1.0}});
    SampledField shifted(g, 0.0);
    int a = 3, b = 5;
    for (int i = 0; i + a < 16; ++i)
        for (int j = 0; j + b < 32; ++j)
            shifted[g.linear({i + a, j + b, 0})] = f.at({i, j, 0});
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 32; ++j)
            if (i >= 16 - a || j >= 32 - b)
                REQUIRE(f.at({i, j, 0}) == 0.0);

    SampledField o1 = fractional_integral(f, 2.0, cfg);
    SampledField o2 = fractional_integral(shifted, 2.0, cfg);
    for (int i = 0; i + a < 16; ++i)
        for (int j = 0; j + b < 32; ++j)
            CHECK(o2.at({i + a, j + b, 0}) == o1.at({i, j, 0}));
}

TEST_CASE("heat kernel")
{
    KernelParams kp{1, 2.0, 2.0};
    CHECK(heat_kernel(Point::make(1, {0.0, 0.0}, 1.0), kp) == 1.0);
    CHECK(heat_kernel(Point::make(1, {2.0, 0.0}, 1.0), kp) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(heat_kernel(Point::make(1, {0.5, 0.0}, 0.0), kp) == 0.0);
    CHECK(heat_kernel(Point::make(1, {0.5, 0.0}, -1.0), kp) == 0.0);

    CounterRng rng(44, "operators-heat");
    for (int k = 0; k < 100; ++k)
    {
        KernelParams q{1 + static_cast<int>(rng.integer(0, 1)), rng.uniform(2.0, 4.0), 0.0};
        q.beta = rng.uniform(0.1, q.n + q.p - 0.1);
        double lam = rng.uniform(0.1, 10.0);
        Point y = Point::make(q.n, {rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(0.05, 3));
        Point ys = Point::make(q.n, {lam * y.x[0], lam * y.x[1]}, std::pow(lam, q.p) * y.t);
        double kappa = (q.n + q.p - q.beta) / (q.p - 1);
        CHECK(q.decay_exponent() == doctest::Approx(kappa).epsilon(1e-14));
        double lhs = heat_kernel(ys, q), rhs = std::pow(lam, -kappa) * heat_kernel(y, q);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
}

TEST_CASE("kernel equivalence scan")
{
    KernelParams kp{1, 2.0, 2.0};
    // On the time axis the ratio is exactly one at every scale.
    for (double s : {1e-3, 0.1, 1.0, 50.0})
    {
        double rho = heat_kernel(Point::make(1, {0.0, 0.0}, s), kp) *
                     std::pow(std::sqrt(s), kp.decay_exponent());
        CHECK(rho == doctest::Approx(1.0).epsilon(1e-12));
    }
    KernelScanReport r = kernel_equivalence_scan(0.5, kp, 10000, 1e-3, 1e3, 5);
    CHECK(r.samples == 10000);
    CHECK(r.min_ratio > 0.0);
    CHECK(std::isfinite(r.max_ratio));
    CHECK(r.max_ratio <= 1.0 + 1e-12);
    CHECK(r.invariance_defect < 1e-12);
}

TEST_CASE("Riesz potential")
{
    GridSpec g = grid2(16, 32, 0.25, 0.0625);
    KernelParams kp{1, 2.0, 2.0};
    SampledField zero = riesz_potential(SampledField(g, 0.0), 0.5, kp);
    for (double v : zero.values)
        CHECK(v == 0.0);

    SampledField f = single_cell(g, {10, 28, 0});
    SampledField out = riesz_potential(f, 0.5, kp);
    Point off = Point::make(1, {6 * 0.25, 0.0}, 24 * 0.0625);  // from cell (4, 4)
    CHECK(out.at({4, 4, 0}) == doctest::Approx(g.cell_volume() * heat_kernel(off, kp)).epsilon(1e-13));

    CounterRng rng(45, "operators-riesz");
    SampledField h = random_noise(g, rng, g.window(), 1.0, false);
    SampledField wide = riesz_potential(h, 0.0, kp), narrow = riesz_potential(h, 0.5, kp);
    for (std::size_t i = 0; i < h.size(); ++i)
        CHECK(wide[i] >= narrow[i]);
}

TEST_CASE("backward maximals match brute force")
{
    // Time reflection only conjugates the two directions up to the half-open
    // snapping of part edges that land on cell centers, so each direction is
    // checked against its own oracle.
    GridSpec g = grid2(8, 16, 0.5, 0.125);
    auto rects = oracle::aligned_rectangles(g, 2.0, 0.25);
    auto ladder = scale_ladder(FamilySpec::exhaustive(), g, 2.0);
    CounterRng rng(46, "operators-backward");
    for (int k = 0; k < 3; ++k)
    {
        SampledField f = random_noise(g, rng, g.window(), 2.0, false);
        MaximalConfig bw = exhaustive_cfg(0.25, 0.3, Direction::backward);
        SampledField unc = maximal(f, 2.0, bw).value;
        SampledField want = oracle::maximal_forward(f, rects, 0.25, 0.3, true);
        bw.centered = true;
        SampledField cen = maximal(f, 2.0, bw).value;
        SampledField want_c = oracle::maximal_centered_forward(f, ladder, 2.0, 0.25, 0.3, true);
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            CHECK(unc[i] == doctest::Approx(want[i]).epsilon(1e-13));
            CHECK(cen[i] == doctest::Approx(want_c[i]).epsilon(1e-13));
        }
    }
}
