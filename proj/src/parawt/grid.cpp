#include "parawt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parawt/error.hpp"

namespace parawt
{
namespace
{
// Snap tolerance in units of one cell; keeps boundaries that land on a
// cell center on the intended side despite rounding.
constexpr double kSnapEps = 1e-9;
}  // namespace

GridSpec GridSpec::make(int n, std::array<int, kMaxAxes> shape,
                        std::array<double, kMaxAxes> origin, double h_x,
                        double h_t)
{
    GridSpec g;
    g.n = n;
    g.shape = shape;
    g.origin = origin;
    g.h_x = h_x;
    g.h_t = h_t;
    for (int a = n + 1; a < kMaxAxes; ++a)
    {
        g.shape[a] = 1;
        g.origin[a] = 0.0;
    }
    g.validate();
    return g;
}

void GridSpec::validate() const
{
    Params{n, 2.0}.validate();
    require(h_x > 0.0 && h_t > 0.0 && std::isfinite(h_x) && std::isfinite(h_t),
            ErrorKind::shape, "grid spacings must be positive");
    for (int a = 0; a < axes(); ++a)
        require(shape[a] >= 1, ErrorKind::shape, "grid cell counts must be >= 1");
}

double GridSpec::cell_volume() const
{
    return std::pow(h_x, n) * h_t;
}

std::size_t GridSpec::cell_count() const
{
    std::size_t c = 1;
    for (int a = 0; a < axes(); ++a)
        c *= static_cast<std::size_t>(shape[a]);
    return c;
}

Box GridSpec::window() const
{
    Box b;
    b.n = n;
    for (int a = 0; a < axes(); ++a)
    {
        b.lo[a] = origin[a];
        b.hi[a] = origin[a] + shape[a] * h(a);
    }
    return b;
}

std::array<std::size_t, kMaxAxes> GridSpec::strides() const
{
    std::array<std::size_t, kMaxAxes> s{};
    std::size_t acc = 1;
    for (int a = axes() - 1; a >= 0; --a)
    {
        s[a] = acc;
        acc *= static_cast<std::size_t>(shape[a]);
    }
    return s;
}

std::size_t GridSpec::linear(std::array<int, kMaxAxes> const& idx) const
{
    std::size_t lin = 0;
    for (int a = 0; a < axes(); ++a)
        lin = lin * static_cast<std::size_t>(shape[a]) + static_cast<std::size_t>(idx[a]);
    return lin;
}

std::array<int, kMaxAxes> GridSpec::unravel(std::size_t lin) const
{
    std::array<int, kMaxAxes> idx{};
    for (int a = axes() - 1; a >= 0; --a)
    {
        idx[a] = static_cast<int>(lin % static_cast<std::size_t>(shape[a]));
        lin /= static_cast<std::size_t>(shape[a]);
    }
    return idx;
}

Point GridSpec::cell_center(std::array<int, kMaxAxes> const& idx) const
{
    Point pt;
    pt.n = n;
    for (int a = 0; a < n; ++a)
        pt.x[a] = center_coord(a, idx[a]);
    pt.t = center_coord(n, idx[n]);
    return pt;
}

bool CellRange::empty() const
{
    for (int a = 0; a <= n; ++a)
        if (hi[a] <= lo[a])
            return true;
    return false;
}

std::size_t CellRange::count() const
{
    if (empty())
        return 0;
    std::size_t c = 1;
    for (int a = 0; a <= n; ++a)
        c *= static_cast<std::size_t>(hi[a] - lo[a]);
    return c;
}

CellRange full_range(GridSpec const& spec)
{
    CellRange r;
    r.n = spec.n;
    for (int a = 0; a < spec.axes(); ++a)
    {
        r.lo[a] = 0;
        r.hi[a] = spec.shape[a];
    }
    return r;
}

CellRange snap(GridSpec const& spec, Box const& b)
{
    CellRange r;
    r.n = spec.n;
    for (int a = 0; a < spec.axes(); ++a)
    {
        double h = spec.h(a);
        double vlo = (b.lo[a] - spec.origin[a]) / h - 0.5;
        double vhi = (b.hi[a] - spec.origin[a]) / h - 0.5;
        double ilo = std::ceil(vlo - kSnapEps);
        double ihi = std::ceil(vhi - kSnapEps);
        ilo = std::clamp(ilo, 0.0, static_cast<double>(spec.shape[a]));
        ihi = std::clamp(ihi, 0.0, static_cast<double>(spec.shape[a]));
        r.lo[a] = static_cast<int>(ilo);
        r.hi[a] = static_cast<int>(ihi);
    }
    return r;
}

bool inside_window(GridSpec const& spec, Box const& b)
{
    for (int a = 0; a < spec.axes(); ++a)
    {
        double slack = kSnapEps * spec.h(a);
        double lo = spec.origin[a];
        double hi = lo + spec.shape[a] * spec.h(a);
        if (b.lo[a] < lo - slack || b.hi[a] > hi + slack)
            return false;
    }
    return true;
}

SampledField::SampledField(GridSpec s, double fill)
    : spec(s), values(s.cell_count(), fill)
{
}

SampledField::SampledField(GridSpec s, std::vector<double> v)
    : spec(s), values(std::move(v))
{
    require(values.size() == spec.cell_count(), ErrorKind::shape,
            "value count " + std::to_string(values.size()) +
                " does not match grid cell count " +
                std::to_string(spec.cell_count()));
}

PrefixTable::PrefixTable(SampledField const& f) : spec_(f.spec), raw_(f)
{
    int axes = spec_.axes();
    std::size_t acc = 1;
    for (int a = axes - 1; a >= 0; --a)
    {
        pstride_[a] = acc;
        acc *= static_cast<std::size_t>(spec_.shape[a] + 1);
    }
    cum_.assign(acc, 0.0);
    nonzero_.assign(acc, 0.0);
    for_each_cell(full_range(spec_), [&](std::array<int, kMaxAxes> const& idx) {
        std::size_t off = 0;
        for (int a = 0; a < axes; ++a)
            off += static_cast<std::size_t>(idx[a] + 1) * pstride_[a];
        cum_[off] = f.at(idx);
        nonzero_[off] = f.at(idx) != 0.0 ? 1.0 : 0.0;
    });
    // Fixed axis-by-axis accumulation order.
    for (int a = 0; a < axes; ++a)
    {
        for (std::size_t off = 0; off < cum_.size(); ++off)
        {
            std::size_t coord = (off / pstride_[a]) % static_cast<std::size_t>(spec_.shape[a] + 1);
            if (coord > 0)
            {
                cum_[off] += cum_[off - pstride_[a]];
                nonzero_[off] += nonzero_[off - pstride_[a]];
            }
        }
    }
}

double PrefixTable::range_sum(CellRange const& r) const
{
    if (r.empty())
        return 0.0;
    int axes = spec_.axes();
    double total = 0.0, scale = 0.0, nonzero = 0.0;
    for (int mask = 0; mask < (1 << axes); ++mask)
    {
        std::size_t off = 0;
        int lows = 0;
        for (int a = 0; a < axes; ++a)
        {
            bool low = (mask >> a) & 1;
            lows += low;
            off += static_cast<std::size_t>(low ? r.lo[a] : r.hi[a]) * pstride_[a];
        }
        total += (lows % 2 == 0) ? cum_[off] : -cum_[off];
        nonzero += (lows % 2 == 0) ? nonzero_[off] : -nonzero_[off];
        scale += std::abs(cum_[off]);
    }
    if (nonzero == 0.0)
        return 0.0;
    if (std::abs(total) >= 1e-3 * scale)
        return total;
    double direct = 0.0;
    for_each_cell(r, [&](std::array<int, kMaxAxes> const& idx) { direct += raw_.at(idx); });
    return direct;
}

double PrefixTable::box_sum(Box const& b) const
{
    return range_sum(snap(spec_, b)) * spec_.cell_volume();
}

PrefixTable build_prefix(SampledField const& f)
{
    return PrefixTable(f);
}

double box_average(PrefixTable const& t, Box const& b)
{
    require(intersect(b, t.spec().window()).has_value(), ErrorKind::domain,
            "box lies outside the grid window");
    CellRange r = snap(t.spec(), b);
    require(!r.empty(), ErrorKind::degenerate, "box snaps to zero cells");
    return t.range_sum(r) / static_cast<double>(r.count());
}

double range_min(SampledField const& f, CellRange const& r)
{
    double m = INFINITY;
    for_each_cell(r, [&](std::array<int, kMaxAxes> const& idx) {
        m = std::min(m, f.at(idx));
    });
    return m;
}

void require_same_grid(GridSpec const& a, GridSpec const& b, char const* what)
{
    require(a == b, ErrorKind::shape, std::string(what) + ": grid specs differ");
}

double weighted_norm(SampledField const& f, SampledField const& w, double r)
{
    require_same_grid(f.spec, w.spec, "weighted_norm");
    require(r >= 1.0, ErrorKind::parameter, "norm exponent must be >= 1");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        require(w[i] >= 0.0, ErrorKind::validation, "weight must be nonnegative");
        double a = std::abs(f[i]);
        if (a != 0.0 && w[i] != 0.0)
            s += std::pow(a, r) * w[i];
    }
    return std::pow(s * f.spec.cell_volume(), 1.0 / r);
}

double weak_norm(SampledField const& f, SampledField const& w, double q)
{
    require_same_grid(f.spec, w.spec, "weak_norm");
    require(q >= 1.0, ErrorKind::parameter, "norm exponent must be >= 1");
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(f[a]) > std::abs(f[b]);
    });
    double cv = f.spec.cell_volume();
    double measure = 0.0;
    double best = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k)
    {
        double v = std::abs(f[order[k]]);
        require(w[order[k]] >= 0.0, ErrorKind::validation, "weight must be nonnegative");
        if (v == 0.0)
            break;
        measure += w[order[k]] * cv;
        bool last_of_level = k + 1 == order.size() || std::abs(f[order[k + 1]]) != v;
        if (last_of_level)
            best = std::max(best, v * std::pow(measure, 1.0 / q));
    }
    return best;
}

SampledField reflect_time(SampledField const& f)
{
    SampledField r(f.spec);
    int nt = f.spec.shape[f.spec.n];
    for_each_cell(full_range(f.spec), [&](std::array<int, kMaxAxes> const& idx) {
        auto m = idx;
        m[f.spec.n] = nt - 1 - idx[f.spec.n];
        r.values[f.spec.linear(m)] = f.at(idx);
    });
    return r;
}

}  // namespace parawt
