// Parabolic rectangles, space-time boxes, the parabolic distance and the
// shaped cones above t = γ‖x‖_∞^p.
#pragma once

#include <array>
#include <optional>

namespace parawt
{

inline constexpr int kMaxSpaceDim = 2;
inline constexpr int kMaxAxes = kMaxSpaceDim + 1;

enum class Direction
{
    forward,
    backward,
};

struct Params
{
    int n = 1;
    double p = 2.0;

    void validate() const;
};

struct Point
{
    int n = 1;
    std::array<double, kMaxSpaceDim> x{};
    double t = 0.0;

    static Point make(int n, std::array<double, kMaxSpaceDim> x, double t)
    {
        return Point{n, x, t};
    }
    // Axis a < n is spatial, a == n is time.
    double coord(int a) const { return a < n ? x[a] : t; }
    void set_coord(int a, double v)
    {
        if (a < n)
            x[a] = v;
        else
            t = v;
    }
    bool operator==(Point const&) const = default;
};

// Half-open product [lo, hi) over the n spatial axes and the time axis.
struct Box
{
    int n = 1;
    std::array<double, kMaxAxes> lo{};
    std::array<double, kMaxAxes> hi{};

    int axes() const { return n + 1; }
    double extent(int a) const { return hi[a] - lo[a]; }
    double volume() const;
    bool contains(Point const& pt) const;
    // Closed containment widened by `slack`.
    bool contains(Point const& pt, double slack) const;
    bool contains(Box const& inner, double slack) const;
    Box translated_time(double dt) const;
    bool operator==(Box const&) const = default;
};

std::optional<Box> intersect(Box const& a, Box const& b);
// Volume of a ∩ b, 0 when disjoint.
double overlap_volume(Box const& a, Box const& b);
// Mirror of a box under t ↦ 2·t0 − t.
Box reflect_time(Box const& b, double t0);

struct ParabolicRectangle
{
    Point center;
    double half_edge = 1.0;
    double p = 2.0;

    int n() const { return center.n; }
    double half_height() const;
    Box full() const;
    Box upper(double gamma) const;
    Box lower(double gamma) const;
    // Volume of either γ-part, 2^n (1−γ) L^{n+p}.
    double part_volume(double gamma) const;
    double top() const { return center.t + half_height(); }
    bool operator==(ParabolicRectangle const&) const = default;
};

ParabolicRectangle make_rectangle(Point center, double half_edge, double p);
Box upper_part(ParabolicRectangle const& r, double gamma);
Box lower_part(ParabolicRectangle const& r, double gamma);
ParabolicRectangle dilate(ParabolicRectangle const& r, double factor);
ParabolicRectangle translate(ParabolicRectangle const& r,
                             std::array<double, kMaxSpaceDim> dx, double dt);

double sup_norm(Point const& pt);
double parabolic_distance(Point const& a, Point const& b, double p);
bool in_cone(Point const& pt, double gamma, double p, Direction dir);

void validate_gamma(double gamma);

}  // namespace parawt
