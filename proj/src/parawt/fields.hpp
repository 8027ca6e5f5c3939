// Test-function generators: smooth bumps, box indicators, seeded noise.
#pragma once

#include <vector>

#include "parawt/grid.hpp"
#include "parawt/random.hpp"

namespace parawt
{

// Product of (1 − u²)² profiles, supported on |x_a − c_a| < radius_x,
// |t − c_t| < radius_t.
struct Bump
{
    Point center;
    double radius_x = 1.0;
    double radius_t = 1.0;
    double amplitude = 1.0;

    double operator()(Point const& pt) const;
    // Profile of f_λ(x,t) := f(λx, λ^p t).
    Bump rescaled(double lambda, double p) const;
};

SampledField sample(GridSpec const& g, std::vector<Bump> const& bumps);
SampledField indicator(GridSpec const& g, Box const& b);

// `count` bumps with centers in `region` and radii drawn from the given
// ranges (clipped so the support stays inside `region`).
std::vector<Bump> random_bumps(CounterRng& rng, Box const& region, int count,
                               double rx_min, double rx_max, double rt_min,
                               double rt_max);

// Uniform noise on the cells whose centers lie in `support`, zero elsewhere.
// With `integer_valued`, values are integers in [0, amplitude].
SampledField random_noise(GridSpec const& g, CounterRng& rng, Box const& support,
                          double amplitude, bool integer_valued);

// The window shrunk by `cells` cells on every side.
Box inner_box(GridSpec const& g, int cells);

}  // namespace parawt
