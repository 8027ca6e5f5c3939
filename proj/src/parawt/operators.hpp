// Fractional maximal operators with time lag, parabolic fractional
// integrals and the heat-kernel Riesz potential on sampled fields.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "parawt/family.hpp"
#include "parawt/grid.hpp"

namespace parawt
{

struct MaximalConfig
{
    double gamma = 0.0;
    double beta = 0.0;
    bool centered = false;
    Direction direction = Direction::forward;
    // Rectangles with L < min_scale are ignored; 0 disables truncation.
    double min_scale = 0.0;
    FamilySpec family;

    void validate() const;
};

struct MaximalResult
{
    SampledField value;
    // 1 where at least one admissible rectangle reached the cell.
    std::vector<std::uint8_t> admissible;
    // Witness per cell: family index (uncentered) or ladder index
    // (centered); -1 when none.
    std::vector<int> witness;
};

MaximalResult maximal(SampledField const& f, double p, MaximalConfig const& cfg);

// Uncentered: sup over rectangles whose evaluation part (R^- forward,
// R^+ backward) contains the cell center.
MaximalResult maximal_uncentered(SampledField const& f, double gamma, double beta,
                                 Direction dir, double min_scale,
                                 RectangleFamily const& fam);

// Centered: sup over L of the rectangle R(x,t,L) centered at the cell.
MaximalResult maximal_centered(SampledField const& f, double p, double gamma,
                               double beta, Direction dir, double min_scale,
                               std::span<double const> ladder);

// |R^±|^β ⨍|f| for the averaged part of one rectangle.
double rectangle_value(PrefixTable const& abs_f, ParabolicRectangle const& R,
                       double gamma, double beta, Direction dir);

struct ShiftedBoundReport
{
    double K = 0.0;
    // max over cells of centered / (K · shifted witness), over cells where
    // every ladder rectangle and its shifted witness are in-window.
    double max_ratio = 0.0;
    std::size_t cells_checked = 0;
    std::size_t violations = 0;
    std::optional<Point> witness;
};

// Cellwise 𝓜^{γ+}_β f ≤ K M^{γ/4+}_β f with the explicit constant
// K = ((1−γ)/(1−γ/4))^{β−1}; the right side is bounded below by the
// shifted rectangle R(x, t+γL^p/2, L).
ShiftedBoundReport centered_vs_shifted_bound(SampledField const& f, double p,
                                             double gamma, double beta,
                                             std::span<double const> ladder,
                                             double tolerance = 1e-12);

enum class SingularPolicy
{
    skip,
    analytic_floor,
};

struct IntegralConfig
{
    double gamma = 0.0;
    double beta = 0.5;
    Direction direction = Direction::forward;
    SingularPolicy singular = SingularPolicy::skip;

    void validate(int n, double p) const;
};

// Midpoint sum over offset cells (y,s) of f(x+y, t+s)·K(y,s)·cellvol where
// K vanishes off the domain; f is zero outside the window.
SampledField cone_convolution(SampledField const& f,
                              std::function<double(Point const&)> const& kernel,
                              std::optional<double> origin_kernel);

SampledField fractional_integral(SampledField const& f, double p,
                                 IntegralConfig const& cfg);

struct KernelParams
{
    int n = 1;
    double p = 2.0;
    double beta = 1.0;

    void validate() const;
    // 1 − (n+p−β)/((p−1)(n+p)).
    double beta_tilde() const;
    // (n+p)(1−β̃) = (n+p−β)/(p−1).
    double decay_exponent() const;
};

double heat_kernel(Point const& pt, KernelParams const& kp);

// Sum of f(x+y, t+s)·h_β(y,s) over offsets (y,s) in the cone above
// s = γ‖y‖^p (half-space s > 0 when γ = 0). The causal heat solution is the
// time reflection of the γ = 0 potential.
SampledField riesz_potential(SampledField const& f, double gamma,
                             KernelParams const& kp);
// Same, restricted to offsets in Ω(γ_outer) \ Ω(γ_inner) (γ_inner > γ_outer).
SampledField riesz_potential_shell(SampledField const& f, double gamma_outer,
                                   double gamma_inner, KernelParams const& kp);

struct KernelScanReport
{
    double min_ratio = INFINITY;
    double max_ratio = 0.0;
    // max relative |ρ(λy, λ^p s) − ρ(y,s)| / ρ(y,s) over samples.
    double invariance_defect = 0.0;
    std::size_t samples = 0;
};

// ρ(y,s) = h_β(y,s)·d_p((y,s),0)^{(n+p)(1−β̃)} over cone samples on a
// log-spaced scale ladder.
KernelScanReport kernel_equivalence_scan(double gamma, KernelParams const& kp,
                                         std::size_t samples, double scale_lo,
                                         double scale_hi, std::uint64_t seed);

}  // namespace parawt
