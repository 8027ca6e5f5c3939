#include "parawt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "parawt/error.hpp"
#include "parawt/heat.hpp"

namespace parawt
{

using nlohmann::json;

void CheckReport::decide()
{
    pass = !applicable || margin >= -tolerance;
}

namespace
{

SampledField map_field(SampledField const& f, auto&& fn)
{
    SampledField out(f.spec);
    for (std::size_t i = 0; i < f.size(); ++i)
        out.values[i] = fn(f.values[i]);
    return out;
}

SampledField abs_of(SampledField const& f)
{
    return map_field(f, [](double x) { return std::abs(x); });
}

// (b − a)/max(a, b) with 0 for a = b = 0: the relative slack of a ≤ b.
double rel_slack(double a, double b)
{
    if (a == b)
        return 0.0;
    if (std::isinf(b))
        return 1.0;
    if (std::isinf(a))
        return -1.0;
    return (b - a) / std::max(std::abs(a), std::abs(b));
}

json point_json(Point const& pt)
{
    json x = json::array();
    for (int a = 0; a < pt.n; ++a)
        x.push_back(pt.x[static_cast<std::size_t>(a)]);
    return {{"x", x}, {"t", pt.t}};
}

json rect_json(ParabolicRectangle const& R)
{
    return {{"center", point_json(R.center)}, {"L", R.half_edge}};
}

// Tracks the smallest relative slack over a sequence of a ≤ b comparisons.
struct SlackTracker
{
    double worst = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    std::size_t violations = 0;
    std::optional<std::size_t> where;

    void add(double a, double b, std::size_t idx, double tol)
    {
        ++count;
        if (a == 0.0 && b == 0.0)
            return;
        double s = rel_slack(a, b);
        if (s < -tol)
            ++violations;
        if (s < worst)
        {
            worst = s;
            where = idx;
        }
    }
    double margin() const { return std::isinf(worst) ? 0.0 : worst; }
};

double roundoff_floor(SampledField const& f)
{
    double m = 0.0;
    for (double x : f.values)
        m = std::max(m, std::abs(x));
    return 1e-12 * m;
}

void require_positive(SampledField const& w, char const* what)
{
    for (double x : w.values)
        require(x > 0.0 && std::isfinite(x), ErrorKind::validation,
                std::string(what) + " must be strictly positive and finite");
}

}  // namespace

// ---- constants -----------------------------------------------------------

double pointwise_control_constant(int n, double gamma, double beta)
{
    validate_gamma(gamma);
    return std::pow(2.0, n * (beta - 1.0)) * std::pow(1.0 - gamma, beta - 1.0);
}

double welland_constant(int n, double p, double gamma, double beta, double eps)
{
    require(gamma > 0.0 && gamma < 1.0, ErrorKind::parameter, "gamma must lie in (0,1)");
    require(eps > 0.0 && eps < std::min(beta, 1.0 - beta), ErrorKind::parameter,
            "epsilon must lie in (0, min(beta, 1-beta))");
    double eta = std::pow(gamma, -1.0 / p);
    double np = n + p;
    double denom = std::pow(eta, np * eps) - 1.0;
    auto slab = [&](double e) {
        return std::pow(2.0, n * e) * std::pow(1.0 - gamma * gamma, e) *
               std::pow(eta, 2.0 * np * e) / denom;
    };
    return slab(1.0 + eps - beta) + slab(1.0 - eps - beta);
}

double time_lag_factor(double r, double q, double gamma1, double gamma2)
{
    validate_gamma(gamma1);
    validate_gamma(gamma2);
    require(gamma1 <= gamma2, ErrorKind::parameter, "time lags must satisfy gamma1 <= gamma2");
    double expo = r > 1.0 ? 1.0 + q / conjugate_exponent(r) : 1.0;
    return std::pow((1.0 - gamma1) / (1.0 - gamma2), expo);
}

// ---- pointwise operator inequalities -------------------------------------

CheckReport check_pointwise_control(SampledField const& f, double p, double gamma,
                                    double beta, std::span<double const> ladder,
                                    double slack)
{
    GridSpec const& g = f.spec;
    CheckReport rep;
    rep.name = "check_pointwise_control";
    double C = pointwise_control_constant(g.n, gamma, beta);
    rep.params = {{"p", p}, {"gamma", gamma}, {"beta", beta}, {"slack", slack},
                  {"ladder", std::vector<double>(ladder.begin(), ladder.end())}};
    SampledField af = abs_of(f);
    MaximalResult M = maximal_centered(af, p, gamma, beta, Direction::forward, 0.0, ladder);
    SampledField I = fractional_integral(af, p, {gamma, beta, Direction::forward,
                                                 SingularPolicy::skip});
    // Prefix-sum averages carry cancellation noise where |f| vanishes.
    double floor = roundoff_floor(M.value);
    SlackTracker tr;
    double max_ratio = 0.0;
    for_each_cell(full_range(g), [&](std::array<int, kMaxAxes> const& idx) {
        Point x = g.cell_center(idx);
        for (double L : ladder)
            if (!inside_window(g, ParabolicRectangle{x, L, p}.full()))
                return;
        std::size_t c = g.linear(idx);
        double lhs = M.value[c] > floor ? M.value[c] : 0.0;
        double rhs = C * I[c];
        tr.add(lhs, rhs, c, slack / (1.0 + slack));
        if (lhs > 0.0)
            max_ratio = std::max(max_ratio, rhs > 0.0 ? lhs / rhs : INFINITY);
    });
    rep.margin = tr.margin();
    rep.tolerance = slack / (1.0 + slack);
    if (tr.where && tr.worst < 0.0)
        rep.witness = g.cell_center(g.unravel(*tr.where));
    rep.details = {{"constant", C},
                   {"cells", tr.count},
                   {"violations", tr.violations},
                   {"max_ratio", max_ratio}};
    rep.decide();
    return rep;
}

std::vector<double> welland_ladder(GridSpec const& g, double p, double gamma)
{
    double T = g.shape[static_cast<std::size_t>(g.n)] * g.h_t;
    double hi = 1.2 * std::pow(T / (gamma * gamma), 1.0 / p);
    double ratio = std::pow(2.0, 0.125);
    std::vector<double> out;
    for (double L = 0.5 * g.h_x; L <= hi; L *= ratio)
        out.push_back(L);
    return out;
}

WellandScan welland_scan(SampledField const& f, double p, double gamma, double beta,
                         double eps, std::span<double const> ladder,
                         SingularPolicy singular)
{
    GridSpec const& g = f.spec;
    require(!ladder.empty(), ErrorKind::parameter, "empty scale ladder");
    require(eps > 0.0 && eps < std::min(beta, 1.0 - beta), ErrorKind::parameter,
            "epsilon must lie in (0, min(beta, 1-beta))");
    double Lmax = *std::max_element(ladder.begin(), ladder.end());
    int pad_x = static_cast<int>(std::ceil(Lmax / g.h_x)) + 1;
    int pad_t = static_cast<int>(std::ceil(std::pow(Lmax, p) / g.h_t)) + 1;

    GridSpec pg = g;
    std::array<int, kMaxAxes> offset{};
    for (int a = 0; a < g.axes(); ++a)
    {
        int pad = a < g.n ? pad_x : pad_t;
        offset[static_cast<std::size_t>(a)] = pad;
        pg.shape[static_cast<std::size_t>(a)] += 2 * pad;
        pg.origin[static_cast<std::size_t>(a)] -= pad * g.h(a);
    }
    SampledField padded(pg);
    for_each_cell(full_range(g), [&](std::array<int, kMaxAxes> const& idx) {
        auto j = idx;
        for (int a = 0; a < g.axes(); ++a)
            j[static_cast<std::size_t>(a)] += offset[static_cast<std::size_t>(a)];
        padded.values[pg.linear(j)] = std::abs(f.at(idx));
    });
    PrefixTable table(padded);
    SampledField I = fractional_integral(abs_of(f), p, {gamma, beta, Direction::forward,
                                                        singular});
    double lag = gamma * gamma;
    SampledField lo(g), hi(g);
    for_each_cell(full_range(g), [&](std::array<int, kMaxAxes> const& idx) {
        auto j = idx;
        for (int a = 0; a < g.axes(); ++a)
            j[static_cast<std::size_t>(a)] += offset[static_cast<std::size_t>(a)];
        Point x = pg.cell_center(j);
        std::size_t c = g.linear(idx);
        for (double L : ladder)
        {
            ParabolicRectangle R{x, L, p};
            if (!admissible(pg, R, lag))
                continue;
            lo[c] = std::max(lo[c], rectangle_value(table, R, lag, beta - eps, Direction::forward));
            hi[c] = std::max(hi[c], rectangle_value(table, R, lag, beta + eps, Direction::forward));
        }
    });
    // Prefix-sum averages carry cancellation noise where |f| vanishes.
    double floor_lo = roundoff_floor(lo);
    double floor_hi = roundoff_floor(hi);
    WellandScan scan;
    for (std::size_t c = 0; c < f.size(); ++c)
    {
        if (lo[c] <= floor_lo && hi[c] <= floor_hi)
            continue;
        ++scan.cells;
        double ratio = I[c] / std::sqrt(lo[c] * hi[c]);
        if (ratio > scan.max_ratio)
        {
            scan.max_ratio = ratio;
            scan.witness = g.cell_center(g.unravel(c));
        }
    }
    return scan;
}

CheckReport check_welland(SampledField const& f, double p, double gamma, double beta,
                          double eps, std::optional<SampledField> const& refined,
                          double drift_tol)
{
    CheckReport rep;
    rep.name = "check_welland";
    rep.params = {{"p", p}, {"gamma", gamma}, {"beta", beta}, {"epsilon", eps},
                  {"refined", refined.has_value()}, {"drift_tol", drift_tol}};
    double C = welland_constant(f.spec.n, p, gamma, beta, eps);
    auto ladder = welland_ladder(f.spec, p, gamma);
    WellandScan coarse = welland_scan(f, p, gamma, beta, eps, ladder);
    rep.margin = 1.0 - coarse.max_ratio / C;
    rep.witness = coarse.witness;
    rep.details = {{"constant", C}, {"max_ratio", coarse.max_ratio}, {"cells", coarse.cells}};
    if (refined)
    {
        WellandScan fine = welland_scan(*refined, p, gamma, beta, eps, ladder);
        double drift = coarse.max_ratio > 0.0
                           ? std::abs(fine.max_ratio - coarse.max_ratio) / coarse.max_ratio
                           : 0.0;
        rep.details["refined_max_ratio"] = fine.max_ratio;
        rep.details["drift"] = drift;
        rep.margin = std::min({rep.margin, 1.0 - fine.max_ratio / C, 1.0 - drift / drift_tol});
    }
    rep.decide();
    return rep;
}

CheckReport check_centered_vs_shifted(SampledField const& f, double p, double gamma,
                                      double beta, std::span<double const> ladder)
{
    CheckReport rep;
    rep.name = "check_centered_vs_shifted";
    rep.params = {{"p", p}, {"gamma", gamma}, {"beta", beta}};
    ShiftedBoundReport b = centered_vs_shifted_bound(f, p, gamma, beta, ladder);
    rep.margin = b.cells_checked == 0 ? 0.0 : 1.0 - b.max_ratio;
    rep.tolerance = 1e-12;
    rep.witness = b.witness;
    rep.details = {{"K", b.K}, {"max_ratio", b.max_ratio}, {"cells", b.cells_checked},
                   {"violations", b.violations}};
    rep.decide();
    return rep;
}

// ---- weight-class identities and inclusions ------------------------------

namespace
{
void attach_rect_witness(CheckReport& rep, RectangleFamily const& fam,
                         SlackTracker const& tr)
{
    if (tr.where && *tr.where < fam.rects.size())
    {
        rep.witness = fam.rects[*tr.where].center;
        rep.details["witness_rectangle"] = rect_json(fam.rects[*tr.where]);
    }
}

double family_sup(TwoWeightEvaluator const& phi, RectangleFamily const& fam,
                  std::vector<double>* values = nullptr)
{
    double best = -INFINITY;
    for (auto const& R : fam.rects)
    {
        double v = phi(R);
        if (values)
            values->push_back(v);
        best = std::max(best, v);
    }
    return best;
}

void require_family(RectangleFamily const& fam)
{
    require(!fam.rects.empty(), ErrorKind::parameter, "empty rectangle family");
}
}  // namespace

CheckReport check_duality(SampledField const& u, SampledField const& v, double r,
                          double q, double gamma, RectangleFamily const& fam, double tol)
{
    require(r > 1.0 && q > 1.0, ErrorKind::parameter, "duality needs r, q > 1");
    require_positive(u, "u");
    require_positive(v, "v");
    require_family(fam);
    CheckReport rep;
    rep.name = "check_duality";
    rep.params = {{"r", r}, {"q", q}, {"gamma", gamma}, {"family", fam.id}};
    double rc = conjugate_exponent(r), qc = conjugate_exponent(q);
    SampledField vinv = map_field(v, [](double x) { return 1.0 / x; });
    SampledField uinv = map_field(u, [](double x) { return 1.0 / x; });
    TwoWeightEvaluator plus(u, v, r, q, gamma, Direction::forward);
    TwoWeightEvaluator minus(vinv, uinv, qc, rc, gamma, Direction::backward);
    double power = rc / q;
    SlackTracker tr;
    double worst_diff = 0.0;
    double sup_plus = -INFINITY, sup_minus = -INFINITY;
    for (std::size_t i = 0; i < fam.rects.size(); ++i)
    {
        double a = minus(fam.rects[i]);
        double b = std::pow(plus(fam.rects[i]), power);
        sup_plus = std::max(sup_plus, plus(fam.rects[i]));
        sup_minus = std::max(sup_minus, a);
        double diff = std::abs(rel_slack(a, b));
        tr.add(-diff, 0.0, i, tol);
        worst_diff = std::max(worst_diff, diff);
    }
    double family_diff = std::abs(rel_slack(sup_minus, std::pow(sup_plus, power)));
    rep.margin = -std::max(worst_diff, family_diff);
    rep.tolerance = tol;
    attach_rect_witness(rep, fam, tr);
    rep.details = {{"rectangles", fam.rects.size()},
                   {"max_rel_diff", worst_diff},
                   {"family_rel_diff", family_diff},
                   {"estimate_plus", sup_plus},
                   {"estimate_minus", sup_minus}};
    rep.decide();
    return rep;
}

CheckReport check_a1_characterization(SampledField const& u, SampledField const& v,
                                      double q, double gamma,
                                      RectangleFamily const& fam)
{
    require_family(fam);
    CheckReport rep;
    rep.name = "check_a1_characterization";
    rep.params = {{"q", q}, {"gamma", gamma}, {"family", fam.id}};
    TaEstimate est = ta_constant(u, v, 1.0, q, gamma, Direction::forward, fam);
    rep.details["estimate"] = est.infinite ? json("inf") : json(est.value);
    if (est.infinite)
    {
        rep.applicable = false;
        rep.decide();
        return rep;
    }
    SampledField uq = map_field(u, [q](double x) { return std::pow(x, q); });
    MaximalResult M = maximal_uncentered(uq, gamma, 0.0, Direction::backward, 0.0, fam);
    SlackTracker tr;
    for (std::size_t c = 0; c < uq.size(); ++c)
    {
        if (!M.admissible[c])
            continue;
        tr.add(M.value[c], est.value * std::pow(v[c], q), c, 1e-12);
    }
    rep.margin = tr.margin();
    rep.tolerance = 1e-12;
    if (tr.where && tr.worst < 0.0)
        rep.witness = u.spec.cell_center(u.spec.unravel(*tr.where));
    rep.details["cells"] = tr.count;
    rep.details["violations"] = tr.violations;
    rep.decide();
    return rep;
}

CheckReport check_time_lag_factor(SampledField const& u, SampledField const& v,
                                  double r, double q, double gamma1, double gamma2,
                                  RectangleFamily const& fam)
{
    require_family(fam);
    CheckReport rep;
    rep.name = "check_time_lag_factor";
    rep.params = {{"r", r}, {"q", q}, {"gamma1", gamma1}, {"gamma2", gamma2},
                  {"family", fam.id}};
    double F = time_lag_factor(r, q, gamma1, gamma2);
    TwoWeightEvaluator e1(u, v, r, q, gamma1, Direction::forward);
    TwoWeightEvaluator e2(u, v, r, q, gamma2, Direction::forward);
    SlackTracker tr;
    double s1 = -INFINITY, s2 = -INFINITY;
    // Per rectangle the snapped γ₂-parts are subsets of the γ₁-parts, so the
    // exact discrete factor is the cell-count ratio; the continuum factor is
    // applied to the family suprema.
    GridSpec const& g = u.spec;
    double vexp = r > 1.0 ? q / conjugate_exponent(r) : 0.0;
    for (std::size_t i = 0; i < fam.rects.size(); ++i)
    {
        auto const& R = fam.rects[i];
        double a1 = e1(R);
        double a2 = e2(R);
        s1 = std::max(s1, a1);
        s2 = std::max(s2, a2);
        auto cells = [&](Box const& b) { return static_cast<double>(snap(g, b).count()); };
        double FR = cells(R.lower(gamma1)) / cells(R.lower(gamma2)) *
                    std::pow(cells(R.upper(gamma1)) / cells(R.upper(gamma2)), vexp);
        tr.add(a2, FR * a1, i, 1e-12);
    }
    double fam_slack = rel_slack(s2, F * s1);
    rep.margin = std::min(tr.margin(), fam_slack);
    rep.tolerance = 1e-12;
    attach_rect_witness(rep, fam, tr);
    rep.details["factor"] = F;
    rep.details["estimate_gamma1"] = s1;
    rep.details["estimate_gamma2"] = s2;
    rep.details["rectangle_violations"] = tr.violations;
    rep.details["family_slack"] = fam_slack;
    rep.decide();
    return rep;
}

CheckReport check_nested_r(SampledField const& u, SampledField const& v,
                           double r_small, double r, double q, double gamma,
                           RectangleFamily const& fam)
{
    require_family(fam);
    require(r_small < r, ErrorKind::parameter, "nested check needs r_small < r");
    CheckReport rep;
    rep.name = "check_nested_r";
    rep.params = {{"r_small", r_small}, {"r", r}, {"q", q}, {"gamma", gamma},
                  {"family", fam.id}};
    TwoWeightEvaluator big(u, v, r, q, gamma, Direction::forward);
    TwoWeightEvaluator small(u, v, r_small, q, gamma, Direction::forward);
    SlackTracker tr;
    double sb = -INFINITY, ss = -INFINITY;
    for (std::size_t i = 0; i < fam.rects.size(); ++i)
    {
        double a = big(fam.rects[i]);
        double b = small(fam.rects[i]);
        sb = std::max(sb, a);
        ss = std::max(ss, b);
        tr.add(a, b, i, 1e-12);
    }
    rep.margin = std::min(tr.margin(), rel_slack(sb, ss));
    rep.tolerance = 1e-12;
    attach_rect_witness(rep, fam, tr);
    rep.details["estimate_r"] = sb;
    rep.details["estimate_r_small"] = ss;
    rep.decide();
    return rep;
}

CheckReport check_nested_q(SampledField const& u, SampledField const& v, double r,
                           double q_small, double q, double gamma,
                           RectangleFamily const& fam)
{
    require_family(fam);
    require(q_small < q, ErrorKind::parameter, "nested check needs q_small < q");
    CheckReport rep;
    rep.name = "check_nested_q";
    rep.params = {{"r", r}, {"q_small", q_small}, {"q", q}, {"gamma", gamma},
                  {"family", fam.id}};
    TwoWeightEvaluator big(u, v, r, q, gamma, Direction::forward);
    TwoWeightEvaluator small(u, v, r, q_small, gamma, Direction::forward);
    double power = q_small / q;
    SlackTracker tr;
    double sb = -INFINITY, ss = -INFINITY;
    for (std::size_t i = 0; i < fam.rects.size(); ++i)
    {
        double a = small(fam.rects[i]);
        double b = big(fam.rects[i]);
        ss = std::max(ss, a);
        sb = std::max(sb, b);
        tr.add(a, std::pow(b, power), i, 1e-12);
    }
    rep.margin = std::min(tr.margin(), rel_slack(ss, std::pow(sb, power)));
    rep.tolerance = 1e-12;
    attach_rect_witness(rep, fam, tr);
    rep.details["estimate_q"] = sb;
    rep.details["estimate_q_small"] = ss;
    rep.decide();
    return rep;
}

CheckReport check_max_min_closure(SampledField const& u, SampledField const& v,
                                  SampledField const& u2, SampledField const& v2,
                                  double r, double q, double gamma,
                                  RectangleFamily const& fam)
{
    require_family(fam);
    CheckReport rep;
    rep.name = "check_max_min_closure";
    rep.params = {{"r", r}, {"q", q}, {"gamma", gamma}, {"family", fam.id}};
    auto combine = [](SampledField const& a, SampledField const& b, bool take_max) {
        require_same_grid(a.spec, b.spec, "closure check");
        SampledField out(a.spec);
        for (std::size_t i = 0; i < a.size(); ++i)
            out.values[i] = take_max ? std::max(a[i], b[i]) : std::min(a[i], b[i]);
        return out;
    };
    TwoWeightEvaluator e1(u, v, r, q, gamma, Direction::forward);
    TwoWeightEvaluator e2(u2, v2, r, q, gamma, Direction::forward);
    TwoWeightEvaluator emax(combine(u, u2, true), combine(v, v2, true), r, q, gamma,
                            Direction::forward);
    std::optional<TwoWeightEvaluator> emin;
    if (r == 1.0)
        emin.emplace(combine(u, u2, false), combine(v, v2, false), r, q, gamma,
                     Direction::forward);
    SlackTracker tr;
    double s1 = -INFINITY, s2 = -INFINITY, smax = -INFINITY, smin = -INFINITY;
    for (std::size_t i = 0; i < fam.rects.size(); ++i)
    {
        auto const& R = fam.rects[i];
        double a = e1(R), b = e2(R), m = emax(R);
        s1 = std::max(s1, a);
        s2 = std::max(s2, b);
        smax = std::max(smax, m);
        tr.add(m, a + b, i, 1e-12);
        if (emin)
        {
            double mn = (*emin)(R);
            smin = std::max(smin, mn);
            tr.add(mn, std::max(a, b), i, 1e-12);
        }
    }
    double margin = std::min(tr.margin(), rel_slack(smax, s1 + s2));
    if (emin)
        margin = std::min(margin, rel_slack(smin, std::max(s1, s2)));
    rep.margin = margin;
    rep.tolerance = 1e-12;
    attach_rect_witness(rep, fam, tr);
    rep.details = {{"estimate_1", s1}, {"estimate_2", s2}, {"estimate_max", smax}};
    if (emin)
        rep.details["estimate_min"] = smin;
    rep.decide();
    return rep;
}

CheckReport check_measure_condition(SampledField const& u, SampledField const& v,
                                    double r, double delta, double C, double gamma,
                                    RectangleFamily const& fam, int random_subsets,
                                    std::uint64_t seed)
{
    require_family(fam);
    CheckReport rep;
    rep.name = "check_measure_condition";
    rep.params = {{"r", r}, {"delta", delta}, {"C", C}, {"gamma", gamma},
                  {"family", fam.id}, {"random_subsets", random_subsets}, {"seed", seed}};
    MeasureConditionReport m =
        measure_condition_check(u, v, r, delta, C, gamma, fam, random_subsets, seed);
    rep.applicable = m.evaluated > 0;
    rep.margin = m.evaluated > 0 ? m.worst_margin : 0.0;
    rep.tolerance = 1e-12;
    if (m.witness)
    {
        rep.witness = m.witness->center;
        rep.details["witness_rectangle"] = rect_json(*m.witness);
        rep.details["witness_subset_cells"] = m.witness_subset_cells;
        rep.details["witness_lhs"] = m.witness_lhs;
        rep.details["witness_rhs"] = m.witness_rhs;
    }
    rep.details["evaluated"] = m.evaluated;
    rep.details["violations"] = m.violations;
    rep.decide();
    return rep;
}

CheckReport check_self_improvement(SampledField const& u, SampledField const& v,
                                   double r, double q, double gamma,
                                   RectangleFamily const& fam,
                                   std::vector<double> const& deltas)
{
    require_family(fam);
    CheckReport rep;
    rep.name = "check_self_improvement";
    rep.params = {{"r", r}, {"q", q}, {"gamma", gamma}, {"family", fam.id},
                  {"deltas", deltas}};
    TaEstimate base = ta_constant(u, v, r, q, gamma, Direction::forward, fam);
    if (base.infinite)
    {
        rep.applicable = false;
        rep.details["estimate"] = "inf";
        rep.decide();
        return rep;
    }
    json sweep = json::array();
    bool finite = true;
    for (double d : deltas)
    {
        TaEstimate e = ta_constant(u, v, r, q + d, gamma, Direction::forward, fam);
        finite = finite && !e.infinite;
        sweep.push_back({{"delta", d}, {"estimate", e.infinite ? json("inf") : json(e.value)}});
    }
    rep.margin = finite ? 0.0 : -1.0;
    rep.details = {{"estimate", base.value}, {"sweep", sweep}};
    rep.decide();
    return rep;
}

// ---- constructions -------------------------------------------------------

CheckReport check_chain(int n, double p, double gamma, double alpha, double tau,
                        int count, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "check_chain";
    rep.params = {{"n", n}, {"p", p}, {"gamma", gamma}, {"alpha", alpha}, {"tau", tau},
                  {"count", count}, {"seed", seed}};
    ChainScales sc = ChainScales::from(n, p, gamma, alpha, tau);
    CounterRng rng(seed, "chain");
    Point origin;
    origin.n = n;
    ParabolicRectangle base = make_rectangle(origin, 1.0, p);
    double margin = INFINITY;
    double min_overlap = INFINITY;
    std::size_t max_length = 0;
    std::size_t failures = 0;
    json first_failure;
    for (int c = 0; c < count; ++c)
    {
        ChainParams cp;
        cp.gamma = gamma;
        cp.alpha = alpha;
        cp.tau = tau;
        cp.base = base;
        auto pick = [&](std::uint64_t hi) {
            return static_cast<std::uint64_t>(rng.integer(1, static_cast<std::int64_t>(hi)));
        };
        cp.i = pick(sc.subcubes);
        cp.j = pick(sc.J);
        cp.k = pick(sc.subcubes);
        cp.iota = pick(sc.J);
        Chain ch = build_chain(cp);
        ChainReport vr = verify_chain(ch);
        max_length = std::max(max_length, ch.rects.size());
        min_overlap = std::min(min_overlap, vr.min_overlap);
        if (!vr.pass)
        {
            if (failures == 0)
                first_failure = {{"i", cp.i}, {"j", cp.j}, {"k", cp.k}, {"iota", cp.iota},
                                 {"failure", vr.failure}};
            ++failures;
            margin = std::min(margin, -1.0);
        }
        else
        {
            margin = std::min(margin, vr.min_overlap - vr.lower_bound);
        }
    }
    rep.margin = count > 0 ? margin : 0.0;
    rep.details = {{"m", sc.m},
                   {"J", sc.J},
                   {"C1", sc.C1},
                   {"min_overlap", min_overlap},
                   {"max_length", max_length},
                   {"length_bound", 3.0 * sc.C1},
                   {"failures", failures}};
    if (failures > 0)
        rep.details["first_failure"] = first_failure;
    rep.decide();
    return rep;
}

std::vector<SelectionInput> random_selection_inputs(int n, double p, double gamma,
                                                    std::size_t size, CounterRng& rng)
{
    std::vector<SelectionInput> out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i)
    {
        Point c;
        c.n = n;
        for (int a = 0; a < n; ++a)
            c.x[static_cast<std::size_t>(a)] = rng.uniform();
        c.t = rng.uniform();
        double L = std::exp2(rng.uniform(-6.0, -1.0));
        ParabolicRectangle R = make_rectangle(c, L, p);
        Box low = R.lower(gamma);
        Point pt;
        pt.n = n;
        for (int a = 0; a <= n; ++a)
        {
            double lo = low.lo[static_cast<std::size_t>(a)];
            double hi = low.hi[static_cast<std::size_t>(a)];
            pt.set_coord(a, lo + (hi - lo) * (0.01 + 0.98 * rng.uniform()));
        }
        out.push_back({pt, R});
    }
    return out;
}

CheckReport check_selection(int n, double p, double gamma, std::size_t size,
                            int instances, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "check_selection";
    rep.params = {{"n", n}, {"p", p}, {"gamma", gamma}, {"size", size},
                  {"instances", instances}, {"seed", seed}};
    CoveringConstants cc = covering_constants(n, p, gamma);
    double margin = INFINITY;
    std::size_t worst_overlap = 0, band = 0, uncovered = 0, selected = 0, trimmed = 0;
    bool idempotent = true;
    nlohmann::json violation;
    for (int k = 0; k < instances; ++k)
    {
        CounterRng rng(seed, "selection");
        rng = rng.substream(static_cast<std::uint64_t>(k));
        Selection s = select_covering(random_selection_inputs(n, p, gamma, size, rng), gamma);
        SelectionReport vr = verify_selection(s);
        if (vr.first_band_violation && violation.is_null())
        {
            auto [a, b] = *vr.first_band_violation;
            // Processed later in the first pass: its point escaped the earlier P^-(α).
            auto later = s.inputs[a].rect.top() >= s.inputs[b].rect.top() ? b : a;
            rep.witness = s.inputs[later].point;
            violation = {{"instance", k},
                         {"first", rect_json(s.inputs[a].rect)},
                         {"second", rect_json(s.inputs[b].rect)}};
        }
        worst_overlap = std::max(worst_overlap, vr.max_overlap);
        band += vr.band_violations;
        uncovered += vr.uncovered_points;
        trimmed += vr.trimmed_sets;
        selected += s.selected.size();
        idempotent = idempotent && vr.idempotent;
        double m = (cc.C4 - static_cast<double>(vr.max_overlap)) / cc.C4;
        margin = std::min(margin, vr.pass ? m : -1.0);
    }
    rep.margin = instances > 0 ? margin : 0.0;
    rep.details = {{"C1", cc.C1},
                   {"C4", cc.C4},
                   {"threshold", cc.threshold},
                   {"max_overlap", worst_overlap},
                   {"band_violations", band},
                   {"uncovered_points", uncovered},
                   {"trimmed_sets", trimmed},
                   {"selected_total", selected},
                   {"idempotent", idempotent}};
    if (!violation.is_null())
        rep.details["band_violation_example"] = violation;
    rep.decide();
    return rep;
}

// ---- kernels -------------------------------------------------------------

CheckReport check_kernel_equivalence(double gamma, KernelParams const& kp,
                                     std::size_t samples, std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "check_kernel_equivalence";
    rep.params = {{"gamma", gamma}, {"n", kp.n}, {"p", kp.p}, {"beta", kp.beta},
                  {"samples", samples}, {"seed", seed}};
    KernelScanReport s = kernel_equivalence_scan(gamma, kp, samples, 1e-2, 1e2, seed);
    bool bracket = s.min_ratio > 0.0 && std::isfinite(s.max_ratio);
    rep.margin = bracket ? -s.invariance_defect : -INFINITY;
    rep.tolerance = 1e-12;
    rep.details = {{"min_ratio", s.min_ratio},
                   {"max_ratio", s.max_ratio},
                   {"invariance_defect", s.invariance_defect},
                   {"samples", s.samples}};
    rep.decide();
    return rep;
}

CheckReport check_riesz_domination(SampledField const& f, double gamma,
                                   KernelParams const& kp)
{
    CheckReport rep;
    rep.name = "check_riesz_domination";
    rep.params = {{"gamma", gamma}, {"n", kp.n}, {"p", kp.p}, {"beta", kp.beta}};
    SampledField af = abs_of(f);
    SampledField whole = riesz_potential(af, 0.0, kp);
    SampledField cone = riesz_potential(af, gamma, kp);
    SlackTracker tr;
    for (std::size_t c = 0; c < af.size(); ++c)
        tr.add(cone[c], whole[c], c, 0.0);
    rep.margin = tr.worst < 0.0 ? tr.worst : 0.0;
    if (tr.where && tr.worst < 0.0)
        rep.witness = f.spec.cell_center(f.spec.unravel(*tr.where));
    rep.details = {{"cells", tr.count}, {"violations", tr.violations}};
    rep.decide();
    return rep;
}

CheckReport check_shell_domination(double gamma, KernelParams const& kp, int shells,
                                   std::size_t samples, std::uint64_t seed)
{
    kp.validate();
    require(gamma > 0.0 && gamma < 1.0, ErrorKind::parameter, "gamma must lie in (0,1)");
    require(shells >= 1, ErrorKind::parameter, "need at least one shell");
    CheckReport rep;
    rep.name = "check_shell_domination";
    rep.params = {{"gamma", gamma}, {"n", kp.n}, {"p", kp.p}, {"beta", kp.beta},
                  {"shells", shells}, {"samples", samples}, {"seed", seed}};
    double p = kp.p;
    double kappa = kp.decay_exponent();
    CounterRng rng(seed, "shells");
    json per_shell = json::array();
    double margin = INFINITY;
    for (int j = 0; j < shells; ++j)
    {
        double g_out = gamma / std::exp2(j);  // shell is Ω(g_out) \ Ω(2 g_out) for j ≥ 1
        double coef = std::pow(std::pow(std::exp2(j) / gamma, 1.0 / p) + 1.0, kappa);
        double decay = j == 0 ? 1.0
                              : std::exp(-((p - 1.0) / p) *
                                         std::pow(std::exp2(j - 1) / (p * gamma), 1.0 / (p - 1.0)));
        double worst = INFINITY;
        double max_ratio = 0.0;
        for (std::size_t k = 0; k < samples; ++k)
        {
            double s = std::pow(10.0, rng.uniform(-2.0, 2.0));
            // |y|^p/s uniform in the shell's admissible range.
            double lo = j == 0 ? 0.0 : 1.0 / (2.0 * g_out);
            double hi = 1.0 / g_out;
            double ratio = lo + (hi - lo) * rng.uniform();
            double radius = std::pow(ratio * s, 1.0 / p);
            Point y;
            y.n = kp.n;
            y.t = s;
            if (kp.n == 1)
            {
                y.x[0] = rng.uniform() < 0.5 ? -radius : radius;
            }
            else
            {
                double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
                y.x[0] = radius * std::cos(th);
                y.x[1] = radius * std::sin(th);
            }
            Point origin;
            origin.n = kp.n;
            double d = parabolic_distance(y, origin, p);
            double bound = coef * std::pow(d, -kappa) * decay;
            double h = heat_kernel(y, kp);
            worst = std::min(worst, rel_slack(h, bound));
            max_ratio = std::max(max_ratio, h / bound);
        }
        margin = std::min(margin, worst);
        per_shell.push_back({{"shell", j}, {"coefficient", coef}, {"decay", decay},
                             {"max_ratio", max_ratio}});
    }
    rep.margin = margin;
    rep.tolerance = 1e-12;
    rep.details = {{"kappa", kappa}, {"shells", per_shell}};
    rep.decide();
    return rep;
}

// ---- scaling and norm ratios ---------------------------------------------

char const* operator_name(OperatorKind k)
{
    switch (k)
    {
    case OperatorKind::uncentered_maximal:
        return "uncentered_maximal";
    case OperatorKind::centered_maximal:
        return "centered_maximal";
    case OperatorKind::fractional_integral:
        return "fractional_integral";
    }
    return "unknown";
}

SampledField apply_operator(SampledField const& f, double p, OperatorSpec const& op)
{
    switch (op.kind)
    {
    case OperatorKind::uncentered_maximal:
    case OperatorKind::centered_maximal: {
        MaximalConfig cfg;
        cfg.gamma = op.gamma;
        cfg.beta = op.beta;
        cfg.centered = op.kind == OperatorKind::centered_maximal;
        cfg.family = op.family;
        return maximal(f, p, cfg).value;
    }
    case OperatorKind::fractional_integral:
        return fractional_integral(abs_of(f), p, {op.gamma, op.beta, Direction::forward,
                                                  SingularPolicy::skip});
    }
    fail(ErrorKind::parameter, "unknown operator");
}

std::optional<double> weak_type_ratio(SampledField const& u, SampledField const& v,
                                      SampledField const& f, double r, double q,
                                      double p, OperatorSpec const& op)
{
    SampledField vr = map_field(v, [r](double x) { return std::pow(x, r); });
    double den = weighted_norm(f, vr, r);
    if (den == 0.0)
        return std::nullopt;
    SampledField uq = map_field(u, [q](double x) { return std::pow(x, q); });
    return weak_norm(apply_operator(f, p, op), uq, q) / den;
}

std::optional<double> strong_type_ratio(SampledField const& w, SampledField const& f,
                                        double r, double q, double p,
                                        OperatorSpec const& op)
{
    SampledField wr = map_field(w, [r](double x) { return std::pow(x, r); });
    double den = weighted_norm(f, wr, r);
    if (den == 0.0)
        return std::nullopt;
    SampledField wq = map_field(w, [q](double x) { return std::pow(x, q); });
    return weighted_norm(apply_operator(f, p, op), wq, q) / den;
}

SpreadResult rescaling_spread(GridSpec const& g, double p, std::vector<Bump> const& f,
                              std::vector<double> const& lambdas, bool weak,
                              WeightSpec const& u, WeightSpec const& v, double r,
                              double q, OperatorSpec const& op)
{
    require(!lambdas.empty(), ErrorKind::parameter, "no rescalings given");
    SampledField uf = eval_weight(u, g);
    SampledField vf = eval_weight(v, g);
    SpreadResult out;
    double lo = INFINITY, hi = 0.0;
    for (double lam : lambdas)
    {
        std::vector<Bump> scaled;
        for (auto const& b : f)
            scaled.push_back(b.rescaled(lam, p));
        SampledField fl = sample(g, scaled);
        auto ratio = weak ? weak_type_ratio(uf, vf, fl, r, q, p, op)
                          : strong_type_ratio(uf, fl, r, q, p, op);
        require(ratio.has_value(), ErrorKind::degenerate,
                "rescaled field vanishes on the grid");
        out.lambdas.push_back(lam);
        out.ratios.push_back(*ratio);
        lo = std::min(lo, *ratio);
        hi = std::max(hi, *ratio);
    }
    out.spread = lo > 0.0 ? hi / lo : INFINITY;
    return out;
}

CheckReport check_norm_ratio_spread(GridSpec const& g, double p,
                                    std::vector<Bump> const& f,
                                    std::vector<double> const& lambdas, bool weak,
                                    double r, double q, OperatorSpec const& op,
                                    double max_spread)
{
    CheckReport rep;
    rep.name = weak ? "check_weak_type" : "check_strong_type";
    rep.params = {{"p", p}, {"r", r}, {"q", q}, {"gamma", op.gamma}, {"beta", op.beta},
                  {"operator", operator_name(op.kind)}, {"lambdas", lambdas},
                  {"max_spread", max_spread}};
    WeightSpec one = WeightSpec::constant(1.0);
    SpreadResult s = rescaling_spread(g, p, f, lambdas, weak, one, one, r, q, op);
    rep.margin = 1.0 - s.spread / max_spread;
    rep.details = {{"ratios", s.ratios}, {"spread", s.spread}};
    rep.decide();
    return rep;
}

CheckReport check_scaling_covariance(GridSpec const& g, double p,
                                     std::vector<Bump> const& f, double lambda,
                                     double gamma, double beta, double integral_tol)
{
    require(lambda > 0.0, ErrorKind::parameter, "lambda must be positive");
    CheckReport rep;
    rep.name = "check_scaling_covariance";
    rep.params = {{"p", p}, {"lambda", lambda}, {"gamma", gamma}, {"beta", beta},
                  {"integral_tol", integral_tol}};
    GridSpec gs = g;
    for (int a = 0; a < g.axes(); ++a)
        gs.origin[static_cast<std::size_t>(a)] /= a < g.n ? lambda : std::pow(lambda, p);
    gs.h_x = g.h_x / lambda;
    gs.h_t = g.h_t / std::pow(lambda, p);
    std::vector<Bump> scaled;
    for (auto const& b : f)
        scaled.push_back(b.rescaled(lambda, p));
    SampledField f0 = sample(g, f);
    SampledField f1 = sample(gs, scaled);
    double factor = std::pow(lambda, -(g.n + p) * beta);

    double max_dev = 0.0;
    json per_op = json::array();
    auto compare = [&](char const* what, SampledField const& a, SampledField const& b,
                       double tol) {
        double dev = 0.0;
        double scale = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c)
            scale = std::max(scale, std::abs(a[c]));
        for (std::size_t c = 0; c < a.size(); ++c)
            dev = std::max(dev, std::abs(b[c] - factor * a[c]) / std::max(factor * scale, 1e-300));
        per_op.push_back({{"operator", what}, {"max_rel_dev", dev}, {"tolerance", tol}});
        max_dev = std::max(max_dev, dev / tol);
    };
    for (bool centered : {false, true})
    {
        MaximalConfig cfg;
        cfg.gamma = gamma;
        cfg.beta = beta;
        cfg.centered = centered;
        compare(centered ? "centered_maximal" : "uncentered_maximal",
                maximal(f0, p, cfg).value, maximal(f1, p, cfg).value, 1e-10);
    }
    IntegralConfig ic{gamma, beta, Direction::forward, SingularPolicy::skip};
    compare("fractional_integral", fractional_integral(f0, p, ic),
            fractional_integral(f1, p, ic), integral_tol);
    rep.margin = 1.0 - max_dev;
    rep.details = {{"operators", per_op}};
    rep.decide();
    return rep;
}

// ---- heat equation -------------------------------------------------------

CheckReport check_apriori(HeatSetup const& hs, WeightSpec const& w, double r, double q,
                          std::vector<int> const& nx, int nt,
                          std::vector<double> const& lambdas, double drift_tol,
                          double max_spread)
{
    require(!nx.empty() && !lambdas.empty(), ErrorKind::parameter,
            "need at least one resolution and one rescaling");
    CheckReport rep;
    rep.name = "check_apriori";
    rep.params = {{"X", hs.X}, {"T", hs.T}, {"r", r}, {"q", q}, {"nx", nx}, {"nt", nt},
                  {"lambdas", lambdas}, {"drift_tol", drift_tol}, {"max_spread", max_spread}};
    auto ratio_for = [&](int cells, double lam) {
        HeatProblem hp = HeatProblem::on_window(hs.X, hs.T, cells, nt);
        std::vector<Bump> src;
        for (auto const& b : hs.source)
            src.push_back(b.rescaled(lam, 2.0));
        hp.source = sample(hp.source.spec, src);
        return apriori_ratio(hp, w, r, q).ratio;
    };
    std::vector<double> by_res;
    for (int c : nx)
        by_res.push_back(ratio_for(c, 1.0));
    double drift = 0.0;
    for (double v : by_res)
        drift = std::max(drift, std::abs(v - by_res.front()) / by_res.front());
    std::vector<double> by_scale;
    for (double lam : lambdas)
        by_scale.push_back(lam == 1.0 ? by_res.back() : ratio_for(nx.back(), lam));
    auto [mn, mx] = std::minmax_element(by_scale.begin(), by_scale.end());
    double spread = *mn > 0.0 ? *mx / *mn : INFINITY;
    bool finite = std::all_of(by_res.begin(), by_res.end(), [](double v) { return std::isfinite(v); }) &&
                  std::isfinite(spread);
    rep.margin = finite ? std::min(1.0 - drift / drift_tol, 1.0 - spread / max_spread) : -INFINITY;
    rep.details = {{"ratios_by_resolution", by_res}, {"drift", drift},
                   {"ratios_by_rescaling", by_scale}, {"spread", spread}};
    rep.decide();
    return rep;
}

}  // namespace parawt
