#include "parawt/family.hpp"

#include <cmath>
#include <cstdio>

#include "parawt/error.hpp"
#include "parawt/random.hpp"

namespace parawt
{

FamilySpec FamilySpec::lattice()
{
    return FamilySpec{};
}

FamilySpec FamilySpec::exhaustive()
{
    FamilySpec fs;
    fs.centers = Centers::half_cells;
    fs.center_stride = 1;
    fs.ladder = Ladder::multiples;
    return fs;
}

FamilySpec FamilySpec::aligned(int k_max)
{
    FamilySpec fs;
    fs.centers = Centers::half_cells;
    fs.center_stride = 1;
    fs.ladder = Ladder::multiples;
    fs.l_unit = -1.0;  // resolved to h_x
    fs.l_max = -static_cast<double>(k_max);
    return fs;
}

std::string FamilySpec::id() const
{
    char buf[160];
    char const* c = centers == Centers::nodes        ? "nodes"
                    : centers == Centers::half_cells ? "half"
                                                     : "random";
    if (ladder == Ladder::geometric)
        std::snprintf(buf, sizeof buf, "%s/s%d/geo%.6g[%.6g,%.6g]/n%d", c,
                      center_stride, ratio, l_min, l_max, random_count);
    else
        std::snprintf(buf, sizeof buf, "%s/s%d/mul%.6g[..%.6g]/n%d", c,
                      center_stride, l_unit, l_max, random_count);
    return buf;
}

std::vector<double> scale_ladder(FamilySpec const& fs, GridSpec const& g, double p)
{
    (void)p;
    double width = g.shape[0] * g.h_x;
    std::vector<double> out;
    if (fs.ladder == FamilySpec::Ladder::geometric)
    {
        require(fs.ratio > 1.0, ErrorKind::parameter, "ladder ratio must exceed 1");
        double lo = fs.l_min > 0 ? fs.l_min : 2.0 * g.h_x;
        double hi = fs.l_max > 0 ? fs.l_max : width / 4.0;
        for (int k = 0;; ++k)
        {
            double L = lo * std::pow(fs.ratio, k);
            if (L > hi * (1.0 + 1e-12))
                break;
            out.push_back(L);
        }
    }
    else
    {
        double unit = fs.l_unit > 0 ? fs.l_unit : (fs.l_unit < 0 ? g.h_x : 0.5 * g.h_x);
        double hi = fs.l_max > 0   ? fs.l_max
                    : fs.l_max < 0 ? -fs.l_max * unit
                                   : 0.5 * width;
        for (int k = 1;; ++k)
        {
            double L = k * unit;
            if (L > hi * (1.0 + 1e-12))
                break;
            out.push_back(L);
        }
    }
    return out;
}

bool admissible(GridSpec const& g, ParabolicRectangle const& r, double gamma)
{
    if (!inside_window(g, r.full()))
        return false;
    return !snap(g, r.upper(gamma)).empty() && !snap(g, r.lower(gamma)).empty();
}

RectangleFamily make_family(FamilySpec const& fs, GridSpec const& g, double p,
                            double gamma)
{
    validate_gamma(gamma);
    RectangleFamily fam;
    fam.id = fs.id();
    fam.p = p;
    auto ladder = scale_ladder(fs, g, p);
    int n = g.n;

    auto push = [&](Point const& c, double L) {
        ParabolicRectangle r{c, L, p};
        if (admissible(g, r, gamma))
            fam.rects.push_back(r);
    };

    if (fs.centers == FamilySpec::Centers::random)
    {
        CounterRng rng(fs.seed, "family");
        Box w = g.window();
        int attempts = 0;
        while (static_cast<int>(fam.rects.size()) < fs.random_count && attempts < 1000 * (fs.random_count + 1))
        {
            ++attempts;
            Point c;
            c.n = n;
            for (int a = 0; a < n; ++a)
                c.x[a] = rng.uniform(w.lo[a], w.hi[a]);
            c.t = rng.uniform(w.lo[n], w.hi[n]);
            double L = ladder[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(ladder.size()) - 1))];
            push(c, L);
        }
        return fam;
    }

    // Center lattice per axis.
    require(fs.center_stride >= 1, ErrorKind::parameter, "center stride must be >= 1");
    std::array<std::vector<double>, kMaxAxes> coords;
    for (int a = 0; a <= n; ++a)
    {
        double h = g.h(a);
        if (fs.centers == FamilySpec::Centers::nodes)
        {
            for (int k = 0; k <= g.shape[a]; k += fs.center_stride)
                coords[a].push_back(g.origin[a] + k * h);
        }
        else
        {
            for (int k = 0; k <= 2 * g.shape[a]; k += fs.center_stride)
                coords[a].push_back(g.origin[a] + k * 0.5 * h);
        }
    }
    CellRange lattice;
    lattice.n = n;
    for (int a = 0; a <= n; ++a)
    {
        lattice.lo[a] = 0;
        lattice.hi[a] = static_cast<int>(coords[a].size());
    }
    for (double L : ladder)
    {
        for_each_cell(lattice, [&](std::array<int, kMaxAxes> const& idx) {
            Point c;
            c.n = n;
            for (int a = 0; a < n; ++a)
                c.x[a] = coords[a][static_cast<std::size_t>(idx[a])];
            c.t = coords[n][static_cast<std::size_t>(idx[n])];
            push(c, L);
        });
    }
    return fam;
}

}  // namespace parawt
