#include "parawt/heat.hpp"

#include <cmath>

#include "parawt/error.hpp"
#include "parawt/fields.hpp"

namespace parawt
{

HeatProblem HeatProblem::on_window(double X, double T, int nx, int nt)
{
    require(X > 0.0 && T > 0.0, ErrorKind::shape, "heat window must be nonempty");
    GridSpec g = GridSpec::make(1, {nx, nt, 1}, {-X, 0.0, 0.0}, 2.0 * X / nx, T / nt);
    return HeatProblem{SampledField(g)};
}

void HeatProblem::validate() const
{
    GridSpec const& g = source.spec;
    require(g.n == 1, ErrorKind::shape, "heat solver supports n = 1 only");
    require(g.shape[0] >= 5, ErrorKind::shape, "heat solver needs at least 5 spatial cells");
    int nx = g.shape[0];
    int nt = g.shape[1];
    for (int it = 0; it < nt; ++it)
        for (int ix : {0, 1, nx - 2, nx - 1})
            require(source.at({ix, it, 0}) == 0.0, ErrorKind::validation,
                    "source must vanish within two cells of the spatial boundary");
}

namespace
{
// Solves (diag) g_i − off (g_{i−1} + g_{i+1}) = rhs_i with zero ends.
void thomas(double diag, double off, std::vector<double>& rhs, std::vector<double>& scratch)
{
    std::size_t n = rhs.size();
    scratch.assign(n, 0.0);
    double denom = diag;
    scratch[0] = -off / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i)
    {
        denom = diag + off * scratch[i - 1];
        scratch[i] = -off / denom;
        rhs[i] = (rhs[i] + off * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] -= scratch[i] * rhs[i + 1];
}

double step_length(GridSpec const& g, int k)
{
    return k == 0 ? 0.5 * g.h_t : g.h_t;
}
}  // namespace

SampledField heat_solve(HeatProblem const& hp)
{
    hp.validate();
    GridSpec const& g = hp.source.spec;
    int nx = g.shape[0];
    int nt = g.shape[1];
    double inv_h2 = 1.0 / (g.h_x * g.h_x);
    SampledField out(g);
    std::vector<double> prev(static_cast<std::size_t>(nx), 0.0), rhs, scratch;
    for (int k = 0; k < nt; ++k)
    {
        double dt = step_length(g, k);
        rhs.resize(static_cast<std::size_t>(nx));
        for (int i = 0; i < nx; ++i)
            rhs[static_cast<std::size_t>(i)] = hp.source.at({i, k, 0}) + prev[static_cast<std::size_t>(i)] / dt;
        thomas(1.0 / dt + 2.0 * inv_h2, inv_h2, rhs, scratch);
        for (int i = 0; i < nx; ++i)
            out.values[g.linear({i, k, 0})] = rhs[static_cast<std::size_t>(i)];
        prev = rhs;
    }
    return out;
}

double heat_residual(HeatProblem const& hp, SampledField const& g)
{
    GridSpec const& s = hp.source.spec;
    require_same_grid(s, g.spec, "heat residual");
    int nx = s.shape[0];
    int nt = s.shape[1];
    double inv_h2 = 1.0 / (s.h_x * s.h_x);
    double worst = 0.0;
    for (int k = 0; k < nt; ++k)
    {
        double dt = step_length(s, k);
        double fmax = 0.0, rmax = 0.0;
        for (int i = 0; i < nx; ++i)
        {
            double gi = g.at({i, k, 0});
            double gp = k > 0 ? g.at({i, k - 1, 0}) : 0.0;
            double left = i > 0 ? g.at({i - 1, k, 0}) : 0.0;
            double right = i + 1 < nx ? g.at({i + 1, k, 0}) : 0.0;
            double f = hp.source.at({i, k, 0});
            double res = (gi - gp) / dt - (left - 2.0 * gi + right) * inv_h2 - f;
            fmax = std::max(fmax, std::abs(f));
            rmax = std::max(rmax, std::abs(res));
        }
        worst = std::max(worst, rmax / std::max(fmax, 1e-300));
    }
    return worst;
}

AprioriResult apriori_ratio(HeatProblem const& hp, WeightSpec const& w, double r,
                            double q)
{
    require(r >= 1.0 && q > r, ErrorKind::parameter, "a-priori ratio needs 1 <= r < q");
    require(std::abs(1.0 / r - 1.0 / q - 2.0 / 3.0) < 1e-9, ErrorKind::parameter,
            "exponents must satisfy 1/r - 1/q = 2/3");
    SampledField g = heat_solve(hp);
    GridSpec const& s = hp.source.spec;
    SampledField wf = eval_weight(w, s);
    double gs = 0.0, fs = 0.0;
    for_each_cell(snap(s, inner_box(s, 2)), [&](std::array<int, kMaxAxes> const& idx) {
        double wv = wf.at(idx);
        double gv = std::abs(g.at(idx));
        double fv = std::abs(hp.source.at(idx));
        if (gv > 0.0)
            gs += std::pow(gv * wv, q);
        if (fv > 0.0)
            fs += std::pow(fv * wv, r);
    });
    double cv = s.cell_volume();
    AprioriResult res;
    res.solution_norm = std::pow(gs * cv, 1.0 / q);
    res.source_norm = std::pow(fs * cv, 1.0 / r);
    require(res.source_norm > 0.0, ErrorKind::validation, "source vanishes on the interior");
    res.ratio = res.solution_norm / res.source_norm;
    return res;
}

}  // namespace parawt
