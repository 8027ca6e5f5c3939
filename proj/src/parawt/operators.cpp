#include "parawt/operators.hpp"

#include <cmath>

#include "parawt/error.hpp"

namespace parawt
{

void MaximalConfig::validate() const
{
    validate_gamma(gamma);
    require(beta >= 0.0 && beta < 1.0, ErrorKind::parameter, "beta must lie in [0,1)");
    require(min_scale >= 0.0, ErrorKind::parameter, "min_scale must be >= 0");
}

namespace
{
SampledField abs_field(SampledField const& f)
{
    SampledField a(f.spec);
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        require(std::isfinite(f[i]), ErrorKind::validation, "field has non-finite values");
        a.values[i] = std::abs(f[i]);
    }
    return a;
}

MaximalResult empty_result(GridSpec const& g)
{
    MaximalResult res;
    res.value = SampledField(g);
    res.admissible.assign(g.cell_count(), 0);
    res.witness.assign(g.cell_count(), -1);
    return res;
}
}  // namespace

double rectangle_value(PrefixTable const& abs_f, ParabolicRectangle const& R,
                       double gamma, double beta, Direction dir)
{
    Box part = dir == Direction::forward ? R.upper(gamma) : R.lower(gamma);
    CellRange cr = snap(abs_f.spec(), part);
    double avg = abs_f.range_sum(cr) / static_cast<double>(cr.count());
    if (beta == 0.0)
        return avg;
    return std::pow(R.part_volume(gamma), beta) * avg;
}

MaximalResult maximal_uncentered(SampledField const& f, double gamma, double beta,
                                 Direction dir, double min_scale,
                                 RectangleFamily const& fam)
{
    GridSpec const& g = f.spec;
    PrefixTable table(abs_field(f));
    MaximalResult res = empty_result(g);
    for (std::size_t i = 0; i < fam.rects.size(); ++i)
    {
        auto const& R = fam.rects[i];
        if (R.half_edge < min_scale || !admissible(g, R, gamma))
            continue;
        double val = rectangle_value(table, R, gamma, beta, dir);
        Box eval = dir == Direction::forward ? R.lower(gamma) : R.upper(gamma);
        for_each_cell(snap(g, eval), [&](std::array<int, kMaxAxes> const& idx) {
            std::size_t c = g.linear(idx);
            if (!res.admissible[c] || val > res.value.values[c])
            {
                res.value.values[c] = val;
                res.admissible[c] = 1;
                res.witness[c] = static_cast<int>(i);
            }
        });
    }
    return res;
}

MaximalResult maximal_centered(SampledField const& f, double p, double gamma,
                               double beta, Direction dir, double min_scale,
                               std::span<double const> ladder)
{
    GridSpec const& g = f.spec;
    PrefixTable table(abs_field(f));
    MaximalResult res = empty_result(g);
    for_each_cell(full_range(g), [&](std::array<int, kMaxAxes> const& idx) {
        std::size_t c = g.linear(idx);
        Point center = g.cell_center(idx);
        for (std::size_t li = 0; li < ladder.size(); ++li)
        {
            if (ladder[li] < min_scale)
                continue;
            ParabolicRectangle R{center, ladder[li], p};
            if (!admissible(g, R, gamma))
                continue;
            double val = rectangle_value(table, R, gamma, beta, dir);
            if (!res.admissible[c] || val > res.value.values[c])
            {
                res.value.values[c] = val;
                res.admissible[c] = 1;
                res.witness[c] = static_cast<int>(li);
            }
        }
    });
    return res;
}

MaximalResult maximal(SampledField const& f, double p, MaximalConfig const& cfg)
{
    cfg.validate();
    Params{f.spec.n, p}.validate();
    if (cfg.centered)
    {
        auto ladder = scale_ladder(cfg.family, f.spec, p);
        return maximal_centered(f, p, cfg.gamma, cfg.beta, cfg.direction,
                                cfg.min_scale, ladder);
    }
    auto fam = make_family(cfg.family, f.spec, p, cfg.gamma);
    return maximal_uncentered(f, cfg.gamma, cfg.beta, cfg.direction, cfg.min_scale, fam);
}

ShiftedBoundReport centered_vs_shifted_bound(SampledField const& f, double p,
                                             double gamma, double beta,
                                             std::span<double const> ladder,
                                             double tolerance)
{
    validate_gamma(gamma);
    require(beta >= 0.0 && beta < 1.0, ErrorKind::parameter, "beta must lie in [0,1)");
    GridSpec const& g = f.spec;
    PrefixTable table(abs_field(f));
    ShiftedBoundReport rep;
    rep.K = std::pow((1.0 - gamma) / (1.0 - gamma / 4.0), beta - 1.0);
    double lag = gamma / 4.0;
    for_each_cell(full_range(g), [&](std::array<int, kMaxAxes> const& idx) {
        Point x = g.cell_center(idx);
        double centered = 0.0;
        double shifted = 0.0;
        bool any = false;
        for (double L : ladder)
        {
            ParabolicRectangle R{x, L, p};
            ParabolicRectangle P = R;
            P.center.t += 0.5 * gamma * R.half_height();
            if (!admissible(g, R, gamma) || !admissible(g, P, lag))
                continue;
            require(P.lower(lag).contains(x, 1e-9), ErrorKind::structural,
                    "shifted witness does not contain the evaluation point");
            any = true;
            centered = std::max(centered, rectangle_value(table, R, gamma, beta, Direction::forward));
            shifted = std::max(shifted, rectangle_value(table, P, lag, beta, Direction::forward));
        }
        if (!any)
            return;
        ++rep.cells_checked;
        if (centered == 0.0)
            return;
        double ratio = shifted > 0.0 ? centered / (rep.K * shifted) : INFINITY;
        if (ratio > 1.0 + tolerance)
            ++rep.violations;
        if (ratio > rep.max_ratio)
        {
            rep.max_ratio = ratio;
            rep.witness = x;
        }
    });
    return rep;
}

void IntegralConfig::validate(int n, double p) const
{
    validate_gamma(gamma);
    require(beta > 0.0 && beta < 1.0, ErrorKind::parameter, "beta must lie in (0,1)");
    double k = (n + p) * (1.0 - beta);
    require(k > 0.0 && k < n + p, ErrorKind::parameter, "kernel exponent out of range");
}

SampledField cone_convolution(SampledField const& f,
                              std::function<double(Point const&)> const& kernel,
                              std::optional<double> origin_kernel)
{
    GridSpec const& g = f.spec;
    int axes = g.axes();
    double cv = g.cell_volume();
    struct Tap
    {
        std::array<int, kMaxAxes> off;
        double w;
    };
    std::vector<Tap> taps;
    CellRange offsets;
    offsets.n = g.n;
    for (int a = 0; a < axes; ++a)
    {
        offsets.lo[a] = -(g.shape[a] - 1);
        offsets.hi[a] = g.shape[a];
    }
    for_each_cell(offsets, [&](std::array<int, kMaxAxes> const& off) {
        bool origin = true;
        Point y;
        y.n = g.n;
        for (int a = 0; a < axes; ++a)
        {
            origin = origin && off[a] == 0;
            y.set_coord(a, off[a] * g.h(a));
        }
        double w = origin ? origin_kernel.value_or(0.0) : kernel(y);
        if (w != 0.0)
            taps.push_back({off, w * cv});
    });

    SampledField out(g);
    for_each_cell(full_range(g), [&](std::array<int, kMaxAxes> const& idx) {
        double s = 0.0;
        for (auto const& tap : taps)
        {
            std::array<int, kMaxAxes> src{};
            bool inside = true;
            for (int a = 0; a < axes; ++a)
            {
                src[a] = idx[a] + tap.off[a];
                inside = inside && src[a] >= 0 && src[a] < g.shape[a];
            }
            if (inside)
                s += f.at(src) * tap.w;
        }
        out.values[g.linear(idx)] = s;
    });
    return out;
}

SampledField fractional_integral(SampledField const& f, double p,
                                 IntegralConfig const& cfg)
{
    int n = f.spec.n;
    Params{n, p}.validate();
    cfg.validate(n, p);
    double expo = (n + p) * (1.0 - cfg.beta);
    Point origin;
    origin.n = n;
    auto kernel = [&](Point const& y) {
        if (!in_cone(y, cfg.gamma, p, cfg.direction))
            return 0.0;
        return std::pow(parabolic_distance(y, origin, p), -expo);
    };
    std::optional<double> center;
    if (cfg.singular == SingularPolicy::analytic_floor)
    {
        Point corner;
        corner.n = n;
        for (int a = 0; a < n; ++a)
            corner.x[a] = 0.5 * f.spec.h_x;
        corner.t = 0.5 * f.spec.h_t;
        center = std::pow(parabolic_distance(corner, origin, p), -expo);
    }
    return cone_convolution(f, kernel, center);
}

}  // namespace parawt
