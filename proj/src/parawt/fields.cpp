#include "parawt/fields.hpp"

#include <algorithm>
#include <cmath>

namespace parawt
{
namespace
{
double profile(double u)
{
    if (std::abs(u) >= 1.0)
        return 0.0;
    double s = 1.0 - u * u;
    return s * s;
}
}  // namespace

double Bump::operator()(Point const& pt) const
{
    double v = amplitude * profile((pt.t - center.t) / radius_t);
    for (int a = 0; a < pt.n && v != 0.0; ++a)
        v *= profile((pt.x[a] - center.x[a]) / radius_x);
    return v;
}

Bump Bump::rescaled(double lambda, double p) const
{
    Bump b = *this;
    double lp = std::pow(lambda, p);
    for (int a = 0; a < center.n; ++a)
        b.center.x[a] /= lambda;
    b.center.t /= lp;
    b.radius_x /= lambda;
    b.radius_t /= lp;
    return b;
}

SampledField sample(GridSpec const& g, std::vector<Bump> const& bumps)
{
    SampledField f(g);
    for_each_cell(full_range(g), [&](std::array<int, kMaxAxes> const& idx) {
        Point c = g.cell_center(idx);
        double s = 0.0;
        for (auto const& b : bumps)
            s += b(c);
        f.values[g.linear(idx)] = s;
    });
    return f;
}

SampledField indicator(GridSpec const& g, Box const& b)
{
    SampledField f(g);
    for_each_cell(snap(g, b), [&](std::array<int, kMaxAxes> const& idx) {
        f.values[g.linear(idx)] = 1.0;
    });
    return f;
}

std::vector<Bump> random_bumps(CounterRng& rng, Box const& region, int count,
                               double rx_min, double rx_max, double rt_min,
                               double rt_max)
{
    std::vector<Bump> out;
    int n = region.n;
    for (int i = 0; i < count; ++i)
    {
        Bump b;
        b.center.n = n;
        b.radius_x = rng.uniform(rx_min, rx_max);
        b.radius_t = rng.uniform(rt_min, rt_max);
        for (int a = 0; a < n; ++a)
        {
            double half = std::min(b.radius_x, 0.5 * region.extent(a));
            b.radius_x = half;
            b.center.x[a] = rng.uniform(region.lo[a] + half, region.hi[a] - half);
        }
        b.radius_t = std::min(b.radius_t, 0.5 * region.extent(n));
        b.center.t = rng.uniform(region.lo[n] + b.radius_t, region.hi[n] - b.radius_t);
        b.amplitude = rng.uniform(0.5, 2.0);
        out.push_back(b);
    }
    return out;
}

SampledField random_noise(GridSpec const& g, CounterRng& rng, Box const& support,
                          double amplitude, bool integer_valued)
{
    SampledField f(g);
    for_each_cell(snap(g, support), [&](std::array<int, kMaxAxes> const& idx) {
        double v = integer_valued
                       ? static_cast<double>(rng.integer(0, static_cast<std::int64_t>(amplitude)))
                       : rng.uniform(0.0, amplitude);
        f.values[g.linear(idx)] = v;
    });
    return f;
}

Box inner_box(GridSpec const& g, int cells)
{
    Box b = g.window();
    for (int a = 0; a < g.axes(); ++a)
    {
        b.lo[a] += cells * g.h(a);
        b.hi[a] -= cells * g.h(a);
    }
    return b;
}

}  // namespace parawt
