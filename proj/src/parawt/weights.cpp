#include "parawt/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parawt/error.hpp"
#include "parawt/random.hpp"

namespace parawt
{

WeightSpec WeightSpec::constant(double c)
{
    WeightSpec w;
    w.kind = Kind::constant;
    w.c = c;
    return w;
}

WeightSpec WeightSpec::temporal_power(double t0, double a)
{
    WeightSpec w;
    w.kind = Kind::temporal_power;
    w.t0 = t0;
    w.a = a;
    return w;
}

WeightSpec WeightSpec::spatial_power(double a)
{
    WeightSpec w;
    w.kind = Kind::spatial_power;
    w.a = a;
    return w;
}

WeightSpec WeightSpec::one_sided_exp(double lambda)
{
    WeightSpec w;
    w.kind = Kind::one_sided_exp;
    w.lambda = lambda;
    return w;
}

WeightSpec WeightSpec::product(WeightSpec spatial, WeightSpec temporal)
{
    WeightSpec w;
    w.kind = Kind::product;
    w.spatial = std::make_shared<WeightSpec const>(std::move(spatial));
    w.temporal = std::make_shared<WeightSpec const>(std::move(temporal));
    return w;
}

WeightSpec WeightSpec::grid(SampledField f)
{
    WeightSpec w;
    w.kind = Kind::grid;
    w.samples = std::make_shared<SampledField const>(std::move(f));
    return w;
}

double WeightSpec::value(Point const& pt) const
{
    switch (kind)
    {
    case Kind::constant:
        return c;
    case Kind::temporal_power: {
        double s = t0 + pt.t;
        return s > 0.0 ? std::pow(s, a) : 0.0;
    }
    case Kind::spatial_power: {
        double r2 = 0.0;
        for (int k = 0; k < pt.n; ++k)
            r2 += pt.x[k] * pt.x[k];
        return std::pow(std::sqrt(r2), a);
    }
    case Kind::one_sided_exp:
        return std::exp(lambda * pt.t);
    case Kind::product:
        return spatial->value(pt) * temporal->value(pt);
    case Kind::grid:
        fail(ErrorKind::parameter, "grid weights have no pointwise formula");
    }
    return 0.0;
}

SampledField eval_weight(WeightSpec const& w, GridSpec const& g)
{
    SampledField out(g);
    if (w.kind == WeightSpec::Kind::grid)
    {
        require_same_grid(w.samples->spec, g, "grid weight");
        out = *w.samples;
    }
    else
    {
        for_each_cell(full_range(g), [&](std::array<int, kMaxAxes> const& idx) {
            out.values[g.linear(idx)] = w.value(g.cell_center(idx));
        });
    }
    for (double v : out.values)
    {
        require(!std::isnan(v), ErrorKind::validation, "weight evaluates to NaN");
        require(v >= 0.0, ErrorKind::validation, "weight evaluates to a negative value");
    }
    return out;
}

double conjugate_exponent(double r)
{
    return r == 1.0 ? INFINITY : r / (r - 1.0);
}

namespace
{
void validate_exponents(double r, double q)
{
    require(r >= 1.0 && q >= r && std::isfinite(q), ErrorKind::parameter,
            "exponents must satisfy 1 <= r <= q < inf");
}

SampledField map_values(SampledField const& f, auto&& fn)
{
    SampledField out(f.spec);
    for (std::size_t i = 0; i < f.size(); ++i)
        out.values[i] = fn(f.values[i]);
    return out;
}
}  // namespace

TwoWeightEvaluator::TwoWeightEvaluator(SampledField const& u, SampledField const& v,
                                       double r, double q, double gamma,
                                       Direction dir)
    : spec_(u.spec), r_(r), q_(q), gamma_(gamma), dir_(dir), v_(v)
{
    validate_exponents(r, q);
    validate_gamma(gamma);
    require_same_grid(u.spec, v.spec, "two-weight evaluator");
    uq_.emplace(map_values(u, [q](double x) { return std::pow(x, q); }));
    if (r > 1.0)
    {
        double rc = conjugate_exponent(r);
        vneg_.emplace(map_values(v, [rc](double x) { return x > 0.0 ? std::pow(x, -rc) : 0.0; }));
        vzero_.emplace(map_values(v, [](double x) { return x > 0.0 ? 0.0 : 1.0; }));
    }
}

double TwoWeightEvaluator::operator()(ParabolicRectangle const& R) const
{
    bool fwd = dir_ == Direction::forward;
    CellRange upart = snap(spec_, fwd ? R.lower(gamma_) : R.upper(gamma_));
    CellRange vpart = snap(spec_, fwd ? R.upper(gamma_) : R.lower(gamma_));
    require(!upart.empty() && !vpart.empty(), ErrorKind::degenerate,
            "rectangle part snaps to zero cells");
    double a = uq_->range_sum(upart) / static_cast<double>(upart.count());
    if (r_ > 1.0)
    {
        if (vzero_->range_sum(vpart) > 0.0)
            return INFINITY;
        double b = vneg_->range_sum(vpart) / static_cast<double>(vpart.count());
        return a * std::pow(b, q_ / conjugate_exponent(r_));
    }
    double m = range_min(v_, vpart);
    if (m <= 0.0)
        return INFINITY;
    return a * std::pow(m, -q_);
}

TaEstimate ta_constant(SampledField const& u, SampledField const& v, double r,
                       double q, double gamma, Direction dir,
                       RectangleFamily const& fam, bool keep_trace)
{
    require(!fam.rects.empty(), ErrorKind::parameter, "empty rectangle family");
    TwoWeightEvaluator phi(u, v, r, q, gamma, dir);
    TaEstimate est;
    est.family_id = fam.id;
    est.value = -INFINITY;
    for (auto const& R : fam.rects)
    {
        double val = phi(R);
        if (keep_trace)
            est.trace.push_back(val);
        if (val > est.value)
        {
            est.value = val;
            est.argmax = R;
        }
        if (std::isinf(val) && !keep_trace)
            break;
    }
    est.infinite = std::isinf(est.value);
    return est;
}

TaEstimate ta_constant(WeightSpec const& u, WeightSpec const& v, GridSpec const& g,
                       double r, double q, double gamma, Direction dir,
                       RectangleFamily const& fam, bool keep_trace)
{
    return ta_constant(eval_weight(u, g), eval_weight(v, g), r, q, gamma, dir, fam,
                       keep_trace);
}

LineSamples LineSamples::sample(WeightSpec const& w, double origin, double h,
                                int count, bool temporal)
{
    require(count >= 1 && h > 0.0, ErrorKind::shape, "bad line grid");
    LineSamples s;
    s.origin = origin;
    s.h = h;
    s.values.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
    {
        Point pt;
        pt.n = 1;
        double c = origin + (i + 0.5) * h;
        if (temporal)
            pt.t = c;
        else
            pt.x[0] = c;
        double v = w.value(pt);
        require(v >= 0.0 && !std::isnan(v), ErrorKind::validation,
                "weight evaluates to a negative value");
        s.values[static_cast<std::size_t>(i)] = v;
    }
    return s;
}

namespace
{
// Window sums along a line from both ends. Weights like e^{±t} span many
// orders of magnitude, so a window is summed from whichever end keeps the
// subtracted totals small.
struct TwoSidedSum
{
    std::vector<double> pre, suf;

    explicit TwoSidedSum(std::vector<double> const& x)
        : pre(x.size() + 1, 0.0), suf(x.size() + 1, 0.0)
    {
        for (std::size_t i = 0; i < x.size(); ++i)
            pre[i + 1] = pre[i] + x[i];
        for (std::size_t i = x.size(); i-- > 0;)
            suf[i] = suf[i + 1] + x[i];
    }
    double sum(int lo, int hi) const
    {
        auto l = static_cast<std::size_t>(lo), h = static_cast<std::size_t>(hi);
        return pre[h] <= suf[l] ? pre[h] - pre[l] : suf[l] - suf[h];
    }
};

std::vector<double> mapped(std::vector<double> const& x, auto&& fn)
{
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = fn(x[i]);
    return out;
}

// Window averages of ω^q, ω^{-r'} and zero counts along a line.
struct LinePrefix
{
    TwoSidedSum pos, neg;
    std::vector<double> zeros;
    std::vector<double> const* raw;
    double q, rc;

    LinePrefix(LineSamples const& w, double r, double q_)
        : pos(mapped(w.values, [q_](double x) { return std::pow(x, q_); })),
          neg(mapped(w.values,
                     [r](double x) { return x > 0.0 && r > 1.0 ? std::pow(x, -conjugate_exponent(r)) : 0.0; })),
          raw(&w.values), q(q_), rc(conjugate_exponent(r))
    {
        std::size_t n = w.values.size();
        zeros.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            zeros[i + 1] = zeros[i] + (w.values[i] > 0.0 ? 0.0 : 1.0);
    }
    double avg_pos(int lo, int hi) const { return pos.sum(lo, hi) / (hi - lo); }
    // (⨍ω^{-r'})^{q/r'}, or (min ω)^{-q} when r = 1.
    double neg_factor(int lo, int hi) const
    {
        if (zeros[static_cast<std::size_t>(hi)] - zeros[static_cast<std::size_t>(lo)] > 0.0)
            return INFINITY;
        if (std::isinf(rc))
        {
            double m = INFINITY;
            for (int i = lo; i < hi; ++i)
                m = std::min(m, (*raw)[static_cast<std::size_t>(i)]);
            return std::pow(m, -q);
        }
        return std::pow(neg.sum(lo, hi) / (hi - lo), q / rc);
    }
};
}  // namespace

IntervalEstimate classical_offdiag_constant(LineSamples const& w, double r, double q)
{
    validate_exponents(r, q);
    LinePrefix pre(w, r, q);
    int n = static_cast<int>(w.values.size());
    IntervalEstimate est;
    est.value = -INFINITY;
    for (int lo = 0; lo < n; ++lo)
        for (int hi = lo + 1; hi <= n; ++hi)
        {
            double v = pre.avg_pos(lo, hi) * pre.neg_factor(lo, hi);
            if (v > est.value)
            {
                est.value = v;
                est.lo = lo;
                est.hi = hi;
            }
        }
    est.infinite = std::isinf(est.value);
    return est;
}

OneSidedEstimate one_sided_constant(LineSamples const& w, double r, double q)
{
    validate_exponents(r, q);
    LinePrefix pre(w, r, q);
    int n = static_cast<int>(w.values.size());
    require(n >= 2, ErrorKind::shape, "one-sided estimate needs at least two cells");
    OneSidedEstimate est;
    est.value = -INFINITY;
    for (int m = 1; 2 * m <= n; ++m)
    {
        double best = -INFINITY;
        for (int k = m; k + m <= n; ++k)
        {
            double v = pre.avg_pos(k - m, k) * pre.neg_factor(k, k + m);
            if (v > best)
                best = v;
            if (v > est.value)
            {
                est.value = v;
                est.node = k;
                est.half_cells = m;
            }
        }
        est.per_scale.push_back(best);
    }
    est.infinite = std::isinf(est.value);
    // Divergence: the per-scale sup keeps growing over the second half of
    // the sweep and has grown by at least an order of magnitude.
    auto const& s = est.per_scale;
    if (s.size() >= 4 && s.back() >= 10.0 * s.front())
    {
        bool increasing = true;
        for (std::size_t i = s.size() / 2; i < s.size(); ++i)
            increasing = increasing && s[i] >= s[i - 1];
        est.diverging = increasing;
    }
    return est;
}

TaEstimate script_a_constant(SampledField const& w, double r, double q,
                             RectangleFamily const& fam)
{
    validate_exponents(r, q);
    require(!fam.rects.empty(), ErrorKind::parameter, "empty rectangle family");
    double rc = conjugate_exponent(r);
    PrefixTable pw(w);
    PrefixTable pneg(map_values(w, [rc](double x) { return x > 0.0 && std::isfinite(rc) ? std::pow(x, -rc) : 0.0; }));
    PrefixTable pzero(map_values(w, [](double x) { return x > 0.0 ? 0.0 : 1.0; }));
    TaEstimate est;
    est.family_id = fam.id;
    est.value = -INFINITY;
    for (auto const& R : fam.rects)
    {
        CellRange cr = snap(w.spec, R.full());
        double cnt = static_cast<double>(cr.count());
        double a = pw.range_sum(cr) / cnt;
        double val;
        if (pzero.range_sum(cr) > 0.0)
            val = INFINITY;
        else if (std::isinf(rc))
            val = a * std::pow(range_min(w, cr), -q);
        else
            val = a * std::pow(pneg.range_sum(cr) / cnt, q / rc);
        if (val > est.value)
        {
            est.value = val;
            est.argmax = R;
        }
    }
    est.infinite = std::isinf(est.value);
    return est;
}

MeasureConditionReport measure_condition_check(SampledField const& u,
                                               SampledField const& v, double r,
                                               double delta, double C,
                                               double gamma,
                                               RectangleFamily const& fam,
                                               int random_subsets,
                                               std::uint64_t seed)
{
    require(delta > 0.0 && delta < 1.0, ErrorKind::parameter, "delta must lie in (0,1)");
    require(r > 1.0 / delta, ErrorKind::parameter, "measure condition needs r > 1/delta");
    require(C > 0.0, ErrorKind::parameter, "constant must be positive");
    validate_gamma(gamma);
    require_same_grid(u.spec, v.spec, "measure condition");
    GridSpec const& g = u.spec;
    double cv = g.cell_volume();
    PrefixTable ur(map_values(u, [r](double x) { return std::pow(x, r); }));
    CounterRng rng(seed, "measure-condition");

    MeasureConditionReport rep;
    auto consider = [&](ParabolicRectangle const& R, std::size_t cells, double lhs, double rhs) {
        ++rep.evaluated;
        double margin = rhs - lhs;
        if (margin < 0.0)
            ++rep.violations;
        if (margin < rep.worst_margin)
        {
            rep.worst_margin = margin;
            rep.witness = R;
            rep.witness_subset_cells = cells;
            rep.witness_lhs = lhs;
            rep.witness_rhs = rhs;
        }
    };

    std::vector<std::size_t> cells;
    for (std::size_t ri = 0; ri < fam.rects.size(); ++ri)
    {
        auto const& R = fam.rects[ri];
        double denom = ur.range_sum(snap(g, R.lower(gamma))) * cv;
        cells.clear();
        for_each_cell(snap(g, R.upper(gamma)), [&](std::array<int, kMaxAxes> const& idx) {
            cells.push_back(g.linear(idx));
        });
        if (cells.empty())
            continue;
        double total = static_cast<double>(cells.size());
        auto vneg = [&](std::size_t c) { return v[c] > 0.0 ? std::pow(v[c], -r) : INFINITY; };
        auto rhs_of = [&](double vr_mass) { return C * std::pow(vr_mass / denom, delta); };

        std::stable_sort(cells.begin(), cells.end(),
                         [&](std::size_t a, std::size_t b) { return vneg(a) > vneg(b); });
        double vr = 0.0;
        for (std::size_t k = 0; k < cells.size(); ++k)
        {
            vr += std::pow(v[cells[k]], r) * cv;
            if (k + 1 < cells.size() && vneg(cells[k + 1]) == vneg(cells[k]))
                continue;
            consider(R, k + 1, static_cast<double>(k + 1) / total, rhs_of(vr));
        }
        for (int s = 0; s < random_subsets; ++s)
        {
            std::size_t chosen = 0;
            double mass = 0.0;
            for (std::size_t c : cells)
            {
                if (rng.next_u64() & 1ULL)
                {
                    ++chosen;
                    mass += std::pow(v[c], r) * cv;
                }
            }
            if (chosen > 0)
                consider(R, chosen, static_cast<double>(chosen) / total, rhs_of(mass));
        }
    }
    return rep;
}

}  // namespace parawt
