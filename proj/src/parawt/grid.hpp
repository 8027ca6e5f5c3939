// Uniform space-time grids, cell-centered sampled fields, summed-area
// tables, and weighted norms.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parawt/geometry.hpp"

namespace parawt
{

struct GridSpec
{
    int n = 1;
    // Cell counts; axes 0..n-1 spatial, axis n time.
    std::array<int, kMaxAxes> shape{1, 1, 1};
    // Lower corner of the window.
    std::array<double, kMaxAxes> origin{};
    double h_x = 1.0;
    double h_t = 1.0;

    static GridSpec make(int n, std::array<int, kMaxAxes> shape,
                         std::array<double, kMaxAxes> origin, double h_x,
                         double h_t);

    void validate() const;
    int axes() const { return n + 1; }
    double h(int a) const { return a < n ? h_x : h_t; }
    double cell_volume() const;
    std::size_t cell_count() const;
    Box window() const;
    // Row-major strides, time fastest.
    std::array<std::size_t, kMaxAxes> strides() const;
    std::size_t linear(std::array<int, kMaxAxes> const& idx) const;
    std::array<int, kMaxAxes> unravel(std::size_t lin) const;
    double center_coord(int a, int i) const { return origin[a] + (i + 0.5) * h(a); }
    Point cell_center(std::array<int, kMaxAxes> const& idx) const;
    bool operator==(GridSpec const&) const = default;
};

// Index range [lo, hi) per axis.
struct CellRange
{
    int n = 1;
    std::array<int, kMaxAxes> lo{};
    std::array<int, kMaxAxes> hi{};

    bool empty() const;
    std::size_t count() const;
};

// Cells whose centers lie in the half-open box, clamped to the window.
CellRange snap(GridSpec const& spec, Box const& b);
// True when the box lies inside the window up to a small relative slack.
bool inside_window(GridSpec const& spec, Box const& b);

struct SampledField
{
    GridSpec spec;
    std::vector<double> values;

    SampledField() = default;
    SampledField(GridSpec s, double fill = 0.0);
    SampledField(GridSpec s, std::vector<double> v);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    double at(std::array<int, kMaxAxes> const& idx) const
    {
        return values[spec.linear(idx)];
    }
    std::size_t size() const { return values.size(); }
};

template <class F>
void for_each_cell(CellRange const& r, F&& fn)
{
    std::array<int, kMaxAxes> idx{};
    if (r.empty())
        return;
    int axes = r.n + 1;
    for (int a = 0; a < axes; ++a)
        idx[a] = r.lo[a];
    while (true)
    {
        fn(idx);
        int a = axes - 1;
        while (a >= 0)
        {
            if (++idx[a] < r.hi[a])
                break;
            idx[a] = r.lo[a];
            --a;
        }
        if (a < 0)
            return;
    }
}

CellRange full_range(GridSpec const& spec);

class PrefixTable
{
  public:
    explicit PrefixTable(SampledField const& f);

    GridSpec const& spec() const { return spec_; }
    // Sum of cell values (no cell volume) over an index range. Falls back to
    // direct summation when the corner differences cancel too much, which
    // happens for weights spanning many orders of magnitude.
    double range_sum(CellRange const& r) const;
    // Integral over the snapped box: value sum times cell volume.
    double box_sum(Box const& b) const;

  private:
    GridSpec spec_;
    std::array<std::size_t, kMaxAxes> pstride_{};
    std::vector<double> cum_;
    std::vector<double> nonzero_;  // prefix counts of nonzero cells, exact
    SampledField raw_;
};

PrefixTable build_prefix(SampledField const& f);
double box_average(PrefixTable const& t, Box const& b);
double range_min(SampledField const& f, CellRange const& r);

double weighted_norm(SampledField const& f, SampledField const& w, double r);
double weak_norm(SampledField const& f, SampledField const& w, double q);

// Reverse the time axis; the window maps onto itself.
SampledField reflect_time(SampledField const& f);
void require_same_grid(GridSpec const& a, GridSpec const& b, char const* what);

// Binary and CSV serialization; both round-trip bit-exactly.
void save_field(SampledField const& f, std::string const& path);
SampledField load_field(std::string const& path);
std::vector<std::uint8_t> encode_field(SampledField const& f);
SampledField decode_field(std::span<std::uint8_t const> bytes);
std::string to_csv(SampledField const& f);
SampledField from_csv(std::string const& text);
void save_field_csv(SampledField const& f, std::string const& path);
SampledField load_field_csv(std::string const& path);

}  // namespace parawt
