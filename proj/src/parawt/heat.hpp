// Implicit-Euler solver for g_t − g_xx = f on [−X, X] × (0, T] with zero
// boundary and initial data, and the weighted a-priori ratio.
#pragma once

#include "parawt/grid.hpp"
#include "parawt/weights.hpp"

namespace parawt
{

struct HeatProblem
{
    // n = 1 grid on [−X, X] × [0, T]; values are the source f.
    SampledField source;

    static HeatProblem on_window(double X, double T, int nx, int nt);
    void validate() const;
};

// g at the cell centers t_k = (k + ½)h_t; the first step has length h_t/2.
SampledField heat_solve(HeatProblem const& hp);

// max over steps of ‖(g^k − g^{k−1})/Δt − Δ_h g^k − f^k‖_∞ / max(‖f^k‖_∞, tiny).
double heat_residual(HeatProblem const& hp, SampledField const& g);

struct AprioriResult
{
    double ratio = 0.0;
    double solution_norm = 0.0;
    double source_norm = 0.0;
};

// ‖g‖_{L^q(w^q)} / ‖f‖_{L^r(w^r)} over cells at least two cells away from
// every boundary; requires 1/r − 1/q = 2/3.
AprioriResult apriori_ratio(HeatProblem const& hp, WeightSpec const& w, double r,
                            double q);

}  // namespace parawt
