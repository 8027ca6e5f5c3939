// Inequality checks over sampled fields and weights, the operator ratios
// behind the weighted norm bounds, and the constants they are compared to.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "parawt/chain.hpp"
#include "parawt/fields.hpp"
#include "parawt/operators.hpp"
#include "parawt/selection.hpp"
#include "parawt/weights.hpp"

namespace parawt
{

struct CheckReport
{
    std::string name;
    nlohmann::json params = nlohmann::json::object();
    // Signed worst-case margin; negative values are violations.
    double margin = 0.0;
    double tolerance = 0.0;
    // Degenerate inputs (e.g. an infinite estimate) make a check vacuous.
    bool applicable = true;
    bool pass = false;
    std::optional<Point> witness;
    nlohmann::json details = nlohmann::json::object();
    double runtime_s = 0.0;

    // pass ⟺ not applicable or margin ≥ −tolerance.
    void decide();
};

// ---- constants -----------------------------------------------------------

// 2^{n(β−1)}(1−γ)^{β−1}.
double pointwise_control_constant(int n, double gamma, double beta);
// Sum of the two slab constants bounding I by √(𝓜_{β−ε}𝓜_{β+ε}) at lag γ².
double welland_constant(int n, double p, double gamma, double beta, double eps);
// ((1−γ₁)/(1−γ₂))^{1+q/r'} (exponent 1 when r = 1).
double time_lag_factor(double r, double q, double gamma1, double gamma2);

// ---- pointwise operator inequalities -------------------------------------

// 𝓜^{γ+}_β f ≤ C·I^{γ+}_β|f|·(1+slack) on cells whose whole centered ladder
// lies in the window.
CheckReport check_pointwise_control(SampledField const& f, double p, double gamma,
                                    double beta, std::span<double const> ladder,
                                    double slack = 0.05);

struct WellandScan
{
    double max_ratio = 0.0;
    std::size_t cells = 0;
    std::optional<Point> witness;
};

// Geometric ladder (ratio 2^{1/8}) from h_x/2 to slightly above
// (T/γ²)^{1/p}, T the time extent of the window.
std::vector<double> welland_ladder(GridSpec const& g, double p, double gamma);

// max over window cells of I^{γ+}_β|f| / √(𝓜^{γ²+}_{β−ε}𝓜^{γ²+}_{β+ε}), the
// maximals taken over centered rectangles of `ladder` on a zero-padded copy
// of f so every ladder rectangle is available; cells where both maximals
// vanish are skipped.
WellandScan welland_scan(SampledField const& f, double p, double gamma, double beta,
                         double eps, std::span<double const> ladder,
                         SingularPolicy singular = SingularPolicy::skip);

// Compares the scan on f with welland_constant; when `refined` (the same
// continuum field sampled on a finer grid) is given, also bounds the
// relative drift of the maximum ratio by `drift_tol`.
CheckReport check_welland(SampledField const& f, double p, double gamma, double beta,
                          double eps, std::optional<SampledField> const& refined,
                          double drift_tol = 0.2);

CheckReport check_centered_vs_shifted(SampledField const& f, double p, double gamma,
                                      double beta, std::span<double const> ladder);

// ---- weight-class identities and inclusions ------------------------------

// Φ^-(v^{-1},u^{-1}; q',r') = Φ^+(u,v; r,q)^{r'/q} per rectangle and for
// the family sup. Requires r, q > 1 and strictly positive weights.
CheckReport check_duality(SampledField const& u, SampledField const& v, double r,
                          double q, double gamma, RectangleFamily const& fam,
                          double tol = 1e-10);

// M^{γ−}_0(u^q) ≤ [u,v]_{TA_{1,q}^+(γ)}·v^q cellwise with the same family.
CheckReport check_a1_characterization(SampledField const& u, SampledField const& v,
                                      double q, double gamma,
                                      RectangleFamily const& fam);

// value(γ₂) ≤ time_lag_factor·value(γ₁) per rectangle and for the family.
CheckReport check_time_lag_factor(SampledField const& u, SampledField const& v,
                                  double r, double q, double gamma1, double gamma2,
                                  RectangleFamily const& fam);

// estimate(r) ≤ estimate(r_small) for r_small < r ≤ q.
CheckReport check_nested_r(SampledField const& u, SampledField const& v,
                           double r_small, double r, double q, double gamma,
                           RectangleFamily const& fam);

// estimate(r, q_small) ≤ estimate(r, q)^{q_small/q} for r ≤ q_small < q.
CheckReport check_nested_q(SampledField const& u, SampledField const& v, double r,
                           double q_small, double q, double gamma,
                           RectangleFamily const& fam);

// [max(u,ũ), max(v,ṽ)] ≤ [u,v] + [ũ,ṽ] and, for r = 1,
// [min(u,ũ), min(v,ṽ)] ≤ max([u,v], [ũ,ṽ]).
CheckReport check_max_min_closure(SampledField const& u, SampledField const& v,
                                  SampledField const& u2, SampledField const& v2,
                                  double r, double q, double gamma,
                                  RectangleFamily const& fam);

CheckReport check_measure_condition(SampledField const& u, SampledField const& v,
                                    double r, double delta, double C, double gamma,
                                    RectangleFamily const& fam, int random_subsets,
                                    std::uint64_t seed);

// Sweeps q+δ for δ ∈ `deltas` and reports whether the estimate stays finite.
CheckReport check_self_improvement(SampledField const& u, SampledField const& v,
                                   double r, double q, double gamma,
                                   RectangleFamily const& fam,
                                   std::vector<double> const& deltas = {0.05, 0.1, 0.2});

// ---- constructions -------------------------------------------------------

// Builds and verifies chains for `count` seeded index tuples.
CheckReport check_chain(int n, double p, double gamma, double alpha, double tau,
                        int count, std::uint64_t seed);

// Seeded instances of `size` (point, rectangle) pairs in the unit box.
std::vector<SelectionInput> random_selection_inputs(int n, double p, double gamma,
                                                    std::size_t size,
                                                    CounterRng& rng);
CheckReport check_selection(int n, double p, double gamma, std::size_t size,
                            int instances, std::uint64_t seed);

// ---- kernels -------------------------------------------------------------

CheckReport check_kernel_equivalence(double gamma, KernelParams const& kp,
                                     std::size_t samples, std::uint64_t seed);
// 𝓘^{0+}|f| ≥ 𝓘^{γ+}|f| cellwise.
CheckReport check_riesz_domination(SampledField const& f, double gamma,
                                   KernelParams const& kp);
// Pointwise kernel bounds on the shells Ω(γ/2^{j+1}) \ Ω(γ/2^j), j = 0..shells−1
// (j = 0 is Ω(γ) itself), sampled at seeded points.
CheckReport check_shell_domination(double gamma, KernelParams const& kp, int shells,
                                   std::size_t samples, std::uint64_t seed);

// ---- scaling and norm ratios ---------------------------------------------

enum class OperatorKind
{
    uncentered_maximal,
    centered_maximal,
    fractional_integral,
};

char const* operator_name(OperatorKind k);

struct OperatorSpec
{
    OperatorKind kind = OperatorKind::uncentered_maximal;
    double gamma = 0.5;
    double beta = 0.25;
    FamilySpec family = FamilySpec::lattice();
};

SampledField apply_operator(SampledField const& f, double p, OperatorSpec const& op);

// ‖Op f‖_{L^{q,∞}(u^q)} / ‖f‖_{L^r(v^r)}; nullopt when ‖f‖ = 0.
std::optional<double> weak_type_ratio(SampledField const& u, SampledField const& v,
                                      SampledField const& f, double r, double q,
                                      double p, OperatorSpec const& op);
// ‖Op f‖_{L^q(w^q)} / ‖f‖_{L^r(w^r)}; nullopt when ‖f‖ = 0.
std::optional<double> strong_type_ratio(SampledField const& w, SampledField const& f,
                                        double r, double q, double p,
                                        OperatorSpec const& op);

struct SpreadResult
{
    std::vector<double> lambdas;
    std::vector<double> ratios;
    double spread = 0.0;  // max / min
};

// Ratio over the rescaled profiles f(λx, λ^p t) on one fixed grid.
SpreadResult rescaling_spread(GridSpec const& g, double p, std::vector<Bump> const& f,
                              std::vector<double> const& lambdas, bool weak,
                              WeightSpec const& u, WeightSpec const& v, double r,
                              double q, OperatorSpec const& op);

CheckReport check_norm_ratio_spread(GridSpec const& g, double p,
                                    std::vector<Bump> const& f,
                                    std::vector<double> const& lambdas, bool weak,
                                    double r, double q, OperatorSpec const& op,
                                    double max_spread = 2.0);

// M(f_λ)(x,t) = λ^{−(n+p)β} M(f)(λx, λ^p t) with the family rescaled along,
// comparing a grid g with the grid whose spacings are divided by (λ, λ^p).
CheckReport check_scaling_covariance(GridSpec const& g, double p,
                                     std::vector<Bump> const& f, double lambda,
                                     double gamma, double beta,
                                     double integral_tol = 0.02);

// ---- heat equation -------------------------------------------------------

struct HeatSetup
{
    double X = 4.0;
    double T = 4.0;
    std::vector<Bump> source;  // continuum source profile
};

// a-priori ratio at several spatial resolutions (time steps scaled with h_x²
// kept fixed relative to the coarsest) and across rescalings of the source.
CheckReport check_apriori(HeatSetup const& hs, WeightSpec const& w, double r, double q,
                          std::vector<int> const& nx, int nt,
                          std::vector<double> const& lambdas,
                          double drift_tol = 0.2, double max_spread = 2.0);

}  // namespace parawt
