#include "parawt/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parawt/error.hpp"

namespace parawt
{

ParabolicRectangle Selection::dilated(std::size_t idx) const
{
    return dilate(inputs[idx].rect, 5.0);
}

int dyadic_band(double half_edge)
{
    require(half_edge > 0.0, ErrorKind::parameter, "half-edge must be positive");
    int e = 0;
    double mant = std::frexp(half_edge, &e);  // half_edge = mant·2^e, mant ∈ [½, 1)
    return mant == 0.5 ? 1 - e : -e;
}

bool covered_by_union(Box const& target, std::vector<Box> const& cover, double slack)
{
    int axes = target.axes();
    std::vector<Box const*> hits;
    for (auto const& b : cover)
        if (overlap_volume(b, target) > 0.0)
            hits.push_back(&b);
    if (hits.empty())
        return false;
    std::array<std::vector<double>, kMaxAxes> cuts;
    for (int a = 0; a < axes; ++a)
    {
        cuts[a] = {target.lo[a], target.hi[a]};
        for (auto const* b : hits)
        {
            if (b->lo[a] > target.lo[a] && b->lo[a] < target.hi[a])
                cuts[a].push_back(b->lo[a]);
            if (b->hi[a] > target.lo[a] && b->hi[a] < target.hi[a])
                cuts[a].push_back(b->hi[a]);
        }
        std::sort(cuts[a].begin(), cuts[a].end());
        cuts[a].erase(std::unique(cuts[a].begin(), cuts[a].end()), cuts[a].end());
    }
    CellRange cells;
    cells.n = target.n;
    for (int a = 0; a < axes; ++a)
    {
        cells.lo[a] = 0;
        cells.hi[a] = static_cast<int>(cuts[a].size()) - 1;
    }
    bool all = true;
    for_each_cell(cells, [&](std::array<int, kMaxAxes> const& idx) {
        if (!all)
            return;
        Point z;
        z.n = target.n;
        for (int a = 0; a < axes; ++a)
        {
            auto i = static_cast<std::size_t>(idx[a]);
            if (cuts[a][i + 1] - cuts[a][i] <= slack)
                return;  // sliver below the slack
            z.set_coord(a, 0.5 * (cuts[a][i] + cuts[a][i + 1]));
        }
        bool hit = false;
        for (auto const* b : hits)
            if (b->contains(z, slack))
            {
                hit = true;
                break;
            }
        all = hit;
    });
    return all;
}

Selection select_covering(std::vector<SelectionInput> inputs, double gamma, double slack)
{
    validate_gamma(gamma);
    require(gamma > 0.0, ErrorKind::parameter, "selection needs gamma > 0");
    Selection s;
    s.gamma = gamma;
    s.inputs = std::move(inputs);
    if (s.inputs.empty())
        return s;
    double p = s.inputs.front().rect.p;
    s.alpha = gamma / std::pow(5.0, p);
    for (std::size_t i = 0; i < s.inputs.size(); ++i)
    {
        auto const& in = s.inputs[i];
        require(in.rect.p == p && in.rect.n() == in.point.n, ErrorKind::validation,
                "inconsistent selection input " + std::to_string(i));
        require(in.rect.lower(gamma).contains(in.point, slack), ErrorKind::validation,
                "point " + std::to_string(i) + " is not in its rectangle's lower part");
    }

    std::vector<std::size_t> order(s.inputs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s.inputs[a].rect.top() > s.inputs[b].rect.top();
    });
    std::vector<Box> kept;
    for (std::size_t idx : order)
    {
        bool inside = std::any_of(kept.begin(), kept.end(), [&](Box const& b) {
            return b.contains(s.inputs[idx].point, slack);
        });
        if (!inside)
        {
            kept.push_back(s.dilated(idx).lower(s.alpha));
            s.first_pass.push_back(idx);
        }
    }

    order = s.first_pass;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s.inputs[a].rect.half_edge > s.inputs[b].rect.half_edge;
    });
    kept.clear();
    for (std::size_t idx : order)
    {
        Box target = s.dilated(idx).lower(s.alpha);
        if (!covered_by_union(target, kept, slack))
        {
            kept.push_back(target);
            s.selected.push_back(idx);
        }
    }
    std::sort(s.first_pass.begin(), s.first_pass.end());
    std::sort(s.selected.begin(), s.selected.end());
    return s;
}

CoveringConstants covering_constants(int n, double p, double gamma)
{
    CoveringConstants c;
    double tp = std::pow(2.0, p);
    double three_n = std::pow(3.0, n);
    double denom = std::pow(2.0, n) * (1.0 - gamma) * (tp - 1.0);
    double C2 = (std::pow(2.0, 2 * p + 1) * three_n * (3.0 - gamma) +
                 32.0 * std::pow(3.0, n - 1) * (2.0 - gamma) * (tp - 1.0) * n) /
                denom;
    double C3t = (std::pow(2.0, 2 * p + 2) * three_n * (1.0 - gamma) +
                  16.0 * three_n * (1.0 - gamma) * (tp - 1.0) * n) /
                 denom;
    c.C1 = 2.0 * (C2 + C3t + 1.0);
    c.threshold = 2 * static_cast<std::size_t>(std::ceil(c.C1));
    c.C4_band = std::pow(2.0, 2 * n + p + 2) / (1.0 - gamma);
    c.C4 = c.C4_band + static_cast<double>(c.threshold);
    return c;
}

SelectionReport verify_selection(Selection const& s, std::optional<FieldWitness> field,
                                 double slack)
{
    SelectionReport rep;
    if (s.inputs.empty())
    {
        rep.pass = true;
        rep.idempotent = true;
        return rep;
    }
    int n = s.inputs.front().point.n;
    double p = s.inputs.front().rect.p;
    double gamma = s.gamma;
    rep.constants = covering_constants(n, p, gamma);
    auto const& sel = s.selected;
    std::size_t m = sel.size();

    std::vector<Box> upper(m), lower(m), dil(m);
    std::vector<int> band(m);
    for (std::size_t a = 0; a < m; ++a)
    {
        auto const& R = s.inputs[sel[a]].rect;
        upper[a] = R.upper(gamma);
        lower[a] = R.lower(gamma);
        dil[a] = s.dilated(sel[a]).lower(s.alpha);
        band[a] = dyadic_band(R.half_edge);
    }

    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (band[a] == band[b] &&
                overlap_volume(lower[a], lower[b]) > 1e-12 * std::min(lower[a].volume(), lower[b].volume()))
            {
                if (!rep.first_band_violation)
                    rep.first_band_violation = std::pair{sel[a], sel[b]};
                ++rep.band_violations;
            }

    for (auto const& in : s.inputs)
    {
        bool hit = std::any_of(dil.begin(), dil.end(),
                               [&](Box const& b) { return b.contains(in.point, slack); });
        if (!hit)
            ++rep.uncovered_points;
    }

    // Γ_i: smaller selected rectangles whose upper parts meet R_i^+.
    std::vector<std::vector<std::size_t>> smaller(m);
    std::vector<bool> trimmed(m, false);
    for (std::size_t a = 0; a < m; ++a)
    {
        double la = s.inputs[sel[a]].rect.half_edge;
        for (std::size_t b = 0; b < m; ++b)
            if (s.inputs[sel[b]].rect.half_edge < la && overlap_volume(upper[a], upper[b]) > 0.0)
                smaller[a].push_back(b);
        trimmed[a] = smaller[a].size() > rep.constants.threshold;
        rep.trimmed_sets += trimmed[a];
    }
    auto in_F = [&](std::size_t a, Point const& z) {
        if (!trimmed[a])
            return true;
        std::size_t cnt = 0;
        for (std::size_t b : smaller[a])
            cnt += upper[b].contains(z);
        return cnt < rep.constants.threshold;
    };

    // Overlap ∑ 1_{F_i}, exact on the elementary cells cut by all upper parts.
    if (m > 0)
    {
        int axes = n + 1;
        std::array<std::vector<double>, kMaxAxes> cuts;
        for (int ax = 0; ax < axes; ++ax)
        {
            for (auto const& b : upper)
            {
                cuts[ax].push_back(b.lo[ax]);
                cuts[ax].push_back(b.hi[ax]);
            }
            std::sort(cuts[ax].begin(), cuts[ax].end());
            cuts[ax].erase(std::unique(cuts[ax].begin(), cuts[ax].end()), cuts[ax].end());
        }
        CellRange cells;
        cells.n = n;
        for (int ax = 0; ax < axes; ++ax)
        {
            cells.lo[ax] = 0;
            cells.hi[ax] = static_cast<int>(cuts[ax].size()) - 1;
        }
        for_each_cell(cells, [&](std::array<int, kMaxAxes> const& idx) {
            Point z;
            z.n = n;
            for (int ax = 0; ax < axes; ++ax)
            {
                auto i = static_cast<std::size_t>(idx[ax]);
                z.set_coord(ax, 0.5 * (cuts[ax][i] + cuts[ax][i + 1]));
            }
            std::size_t count = 0;
            for (std::size_t a = 0; a < m; ++a)
                if (upper[a].contains(z) && in_F(a, z))
                    ++count;
            rep.max_overlap = std::max(rep.max_overlap, count);
        });
    }

    std::vector<SelectionInput> again;
    for (std::size_t idx : sel)
        again.push_back(s.inputs[idx]);
    Selection rerun = select_covering(again, gamma, slack);
    rep.idempotent = rerun.selected.size() == m;

    if (field && field->f)
    {
        SampledField const& f = *field->f;
        GridSpec const& g = f.spec;
        double ratio_min = INFINITY;
        for (std::size_t a = 0; a < m; ++a)
        {
            auto const& R = s.inputs[sel[a]].rect;
            double mass = 0.0;
            for_each_cell(snap(g, upper[a]), [&](std::array<int, kMaxAxes> const& idx) {
                if (in_F(a, g.cell_center(idx)))
                    mass += std::abs(f.at(idx));
            });
            mass *= g.cell_volume();
            double need = 0.5 * field->lambda * std::pow(R.part_volume(gamma), 1.0 - field->beta);
            double ratio = mass / need;
            ratio_min = std::min(ratio_min, ratio);
            if (!(ratio > 1.0))
                ++rep.mass_violations;
        }
        rep.min_mass_ratio = ratio_min;
    }

    rep.pass = rep.band_violations == 0 && rep.uncovered_points == 0 &&
               static_cast<double>(rep.max_overlap) <= rep.constants.C4 && rep.idempotent &&
               rep.mass_violations == 0;
    return rep;
}

}  // namespace parawt
