#include "parawt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parawt/error.hpp"

namespace parawt
{

void Params::validate() const
{
    require(n == 1 || n == 2, ErrorKind::parameter,
            "spatial dimension must be 1 or 2, got " + std::to_string(n));
    require(std::isfinite(p) && p > 1.0, ErrorKind::parameter,
            "parabolic exponent must exceed 1");
}

void validate_gamma(double gamma)
{
    require(gamma >= 0.0 && gamma < 1.0, ErrorKind::parameter,
            "time lag must lie in [0,1), got " + std::to_string(gamma));
}

double Box::volume() const
{
    double v = 1.0;
    for (int a = 0; a < axes(); ++a)
        v *= hi[a] - lo[a];
    return v;
}

bool Box::contains(Point const& pt) const
{
    for (int a = 0; a < axes(); ++a)
    {
        double c = pt.coord(a);
        if (c < lo[a] || c >= hi[a])
            return false;
    }
    return true;
}

bool Box::contains(Point const& pt, double slack) const
{
    for (int a = 0; a < axes(); ++a)
    {
        double c = pt.coord(a);
        if (c < lo[a] - slack || c > hi[a] + slack)
            return false;
    }
    return true;
}

bool Box::contains(Box const& inner, double slack) const
{
    for (int a = 0; a < axes(); ++a)
    {
        if (inner.lo[a] < lo[a] - slack || inner.hi[a] > hi[a] + slack)
            return false;
    }
    return true;
}

Box Box::translated_time(double dt) const
{
    Box b = *this;
    b.lo[n] += dt;
    b.hi[n] += dt;
    return b;
}

std::optional<Box> intersect(Box const& a, Box const& b)
{
    Box r = a;
    for (int k = 0; k < a.axes(); ++k)
    {
        r.lo[k] = std::max(a.lo[k], b.lo[k]);
        r.hi[k] = std::min(a.hi[k], b.hi[k]);
        if (!(r.lo[k] < r.hi[k]))
            return std::nullopt;
    }
    return r;
}

double overlap_volume(Box const& a, Box const& b)
{
    auto r = intersect(a, b);
    return r ? r->volume() : 0.0;
}

Box reflect_time(Box const& b, double t0)
{
    Box r = b;
    r.lo[b.n] = 2.0 * t0 - b.hi[b.n];
    r.hi[b.n] = 2.0 * t0 - b.lo[b.n];
    return r;
}

double ParabolicRectangle::half_height() const
{
    return std::pow(half_edge, p);
}

Box ParabolicRectangle::full() const
{
    Box b;
    b.n = n();
    for (int a = 0; a < b.n; ++a)
    {
        b.lo[a] = center.x[a] - half_edge;
        b.hi[a] = center.x[a] + half_edge;
    }
    double h = half_height();
    b.lo[b.n] = center.t - h;
    b.hi[b.n] = center.t + h;
    return b;
}

Box ParabolicRectangle::upper(double gamma) const
{
    Box b = full();
    b.lo[b.n] = center.t + gamma * half_height();
    return b;
}

Box ParabolicRectangle::lower(double gamma) const
{
    Box b = full();
    b.hi[b.n] = center.t - gamma * half_height();
    return b;
}

double ParabolicRectangle::part_volume(double gamma) const
{
    return std::pow(2.0, n()) * (1.0 - gamma) *
           std::pow(half_edge, n() + p);
}

ParabolicRectangle make_rectangle(Point center, double half_edge, double p)
{
    require(half_edge > 0.0 && std::isfinite(half_edge), ErrorKind::parameter,
            "half-edge must be positive");
    require(p > 1.0, ErrorKind::parameter, "parabolic exponent must exceed 1");
    return ParabolicRectangle{center, half_edge, p};
}

Box upper_part(ParabolicRectangle const& r, double gamma)
{
    validate_gamma(gamma);
    return r.upper(gamma);
}

Box lower_part(ParabolicRectangle const& r, double gamma)
{
    validate_gamma(gamma);
    return r.lower(gamma);
}

ParabolicRectangle dilate(ParabolicRectangle const& r, double factor)
{
    require(factor > 0.0 && std::isfinite(factor), ErrorKind::parameter,
            "dilation factor must be positive");
    ParabolicRectangle d = r;
    d.half_edge = r.half_edge * factor;
    return d;
}

ParabolicRectangle translate(ParabolicRectangle const& r,
                             std::array<double, kMaxSpaceDim> dx, double dt)
{
    ParabolicRectangle m = r;
    for (int a = 0; a < r.n(); ++a)
        m.center.x[a] += dx[a];
    m.center.t += dt;
    return m;
}

double sup_norm(Point const& pt)
{
    double m = 0.0;
    for (int a = 0; a < pt.n; ++a)
        m = std::max(m, std::abs(pt.x[a]));
    return m;
}

double parabolic_distance(Point const& a, Point const& b, double p)
{
    double s = 0.0;
    for (int k = 0; k < a.n; ++k)
        s = std::max(s, std::abs(a.x[k] - b.x[k]));
    return std::max(s, std::pow(std::abs(a.t - b.t), 1.0 / p));
}

bool in_cone(Point const& pt, double gamma, double p, Direction dir)
{
    double t = dir == Direction::forward ? pt.t : -pt.t;
    if (gamma == 0.0)
        return t > 0.0;
    return t > gamma * std::pow(sup_norm(pt), p);
}

}  // namespace parawt
