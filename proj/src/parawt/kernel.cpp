#include <cmath>

#include "parawt/error.hpp"
#include "parawt/operators.hpp"
#include "parawt/random.hpp"

namespace parawt
{

void KernelParams::validate() const
{
    Params{n, p}.validate();
    require(p >= 2.0, ErrorKind::parameter, "heat kernel needs p >= 2");
    require(beta > 0.0 && beta < n + p, ErrorKind::parameter, "beta must lie in (0, n+p)");
}

double KernelParams::beta_tilde() const
{
    return 1.0 - (n + p - beta) / ((p - 1.0) * (n + p));
}

double KernelParams::decay_exponent() const
{
    return (n + p - beta) / (p - 1.0);
}

double heat_kernel(Point const& pt, KernelParams const& kp)
{
    if (pt.t <= 0.0)
        return 0.0;
    double p = kp.p;
    double r2 = 0.0;
    for (int a = 0; a < pt.n; ++a)
        r2 += pt.x[a] * pt.x[a];
    double xp = std::pow(std::sqrt(r2), p);
    double power = std::pow(pt.t, (kp.beta - kp.n - p) / (p * (p - 1.0)));
    double gauss = std::exp(-((p - 1.0) / p) * std::pow(xp / (p * pt.t), 1.0 / (p - 1.0)));
    return power * gauss;
}

SampledField riesz_potential(SampledField const& f, double gamma,
                             KernelParams const& kp)
{
    kp.validate();
    validate_gamma(gamma);
    require(kp.n == f.spec.n, ErrorKind::shape, "kernel dimension differs from grid");
    auto kernel = [&](Point const& y) {
        return in_cone(y, gamma, kp.p, Direction::forward) ? heat_kernel(y, kp) : 0.0;
    };
    return cone_convolution(f, kernel, std::nullopt);
}

SampledField riesz_potential_shell(SampledField const& f, double gamma_outer,
                                   double gamma_inner, KernelParams const& kp)
{
    kp.validate();
    validate_gamma(gamma_outer);
    validate_gamma(gamma_inner);
    require(gamma_outer < gamma_inner, ErrorKind::parameter, "shell needs gamma_outer < gamma_inner");
    auto kernel = [&](Point const& y) {
        bool in = in_cone(y, gamma_outer, kp.p, Direction::forward) &&
                  !in_cone(y, gamma_inner, kp.p, Direction::forward);
        return in ? heat_kernel(y, kp) : 0.0;
    };
    return cone_convolution(f, kernel, std::nullopt);
}

KernelScanReport kernel_equivalence_scan(double gamma, KernelParams const& kp,
                                         std::size_t samples, double scale_lo,
                                         double scale_hi, std::uint64_t seed)
{
    kp.validate();
    require(gamma > 0.0 && gamma < 1.0, ErrorKind::parameter, "scan needs gamma in (0,1)");
    require(scale_lo > 0.0 && scale_hi >= scale_lo, ErrorKind::parameter, "bad scale range");
    CounterRng rng(seed, "kernel-scan");
    double kappa = kp.decay_exponent();
    Point origin;
    origin.n = kp.n;
    auto rho = [&](Point const& y) {
        return heat_kernel(y, kp) * std::pow(parabolic_distance(y, origin, kp.p), kappa);
    };
    auto scaled = [&](Point y, double lam) {
        for (int a = 0; a < y.n; ++a)
            y.x[a] *= lam;
        y.t *= std::pow(lam, kp.p);
        return y;
    };
    KernelScanReport rep;
    double log_lo = std::log(scale_lo);
    double log_hi = std::log(scale_hi);
    for (std::size_t i = 0; i < samples; ++i)
    {
        Point y;
        y.n = kp.n;
        for (int a = 0; a < kp.n; ++a)
            y.x[a] = rng.uniform(-1.0, 1.0);
        double floor_t = gamma * std::pow(sup_norm(y), kp.p);
        y.t = floor_t + (1.0 - floor_t) * (1.0 - rng.uniform());
        // Log-spaced ladder position of this sample.
        double frac = samples > 1 ? static_cast<double>(i) / static_cast<double>(samples - 1) : 0.0;
        Point z = scaled(y, std::exp(log_lo + frac * (log_hi - log_lo)));
        double r0 = rho(z);
        double r1 = rho(scaled(z, std::exp2(rng.uniform(-3.0, 3.0))));
        rep.min_ratio = std::min(rep.min_ratio, r0);
        rep.max_ratio = std::max(rep.max_ratio, r0);
        rep.invariance_defect = std::max(rep.invariance_defect, std::abs(r1 - r0) / r0);
        ++rep.samples;
    }
    return rep;
}

}  // namespace parawt
