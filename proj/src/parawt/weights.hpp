// Weight specifications and estimators of the two-weight constants.
#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "parawt/family.hpp"
#include "parawt/grid.hpp"

namespace parawt
{

struct WeightSpec
{
    enum class Kind
    {
        constant,        // c
        temporal_power,  // (t0 + t)_+^a
        spatial_power,   // ‖x‖^a (Euclidean)
        one_sided_exp,   // e^{λt}
        product,         // u(x) v(t)
        grid,            // explicit samples
    };

    Kind kind = Kind::constant;
    double c = 1.0;
    double t0 = 0.0;
    double a = 0.0;
    double lambda = 0.0;
    std::shared_ptr<WeightSpec const> spatial;
    std::shared_ptr<WeightSpec const> temporal;
    std::shared_ptr<SampledField const> samples;

    static WeightSpec constant(double c);
    static WeightSpec temporal_power(double t0, double a);
    static WeightSpec spatial_power(double a);
    static WeightSpec one_sided_exp(double lambda);
    static WeightSpec product(WeightSpec spatial, WeightSpec temporal);
    static WeightSpec grid(SampledField f);

    double value(Point const& pt) const;
};

SampledField eval_weight(WeightSpec const& w, GridSpec const& g);

// Per-rectangle two-weight quantity with cached prefix tables. For r > 1
// (forward): ⨍_{R^-} u^q · (⨍_{R^+} v^{-r'})^{q/r'}; for r = 1 the second
// factor is (min_{R^+} v)^{-q}. Backward swaps the roles of the parts.
class TwoWeightEvaluator
{
  public:
    TwoWeightEvaluator(SampledField const& u, SampledField const& v, double r,
                       double q, double gamma, Direction dir);
    double operator()(ParabolicRectangle const& R) const;
    double gamma() const { return gamma_; }

  private:
    GridSpec spec_;
    double r_, q_, gamma_;
    Direction dir_;
    SampledField v_;
    std::optional<PrefixTable> uq_;
    std::optional<PrefixTable> vneg_;
    std::optional<PrefixTable> vzero_;
};

struct TaEstimate
{
    double value = 0.0;
    bool infinite = false;
    std::optional<ParabolicRectangle> argmax;
    std::vector<double> trace;
    std::string family_id;
};

TaEstimate ta_constant(SampledField const& u, SampledField const& v, double r,
                       double q, double gamma, Direction dir,
                       RectangleFamily const& fam, bool keep_trace = false);
TaEstimate ta_constant(WeightSpec const& u, WeightSpec const& v, GridSpec const& g,
                       double r, double q, double gamma, Direction dir,
                       RectangleFamily const& fam, bool keep_trace = false);

// Samples of a weight on a uniform line (one spatial axis or the time axis).
struct LineSamples
{
    double origin = 0.0;
    double h = 1.0;
    std::vector<double> values;

    static LineSamples sample(WeightSpec const& w, double origin, double h,
                              int count, bool temporal);
};

struct IntervalEstimate
{
    double value = 0.0;
    bool infinite = false;
    // Best interval as cell index range [lo, hi).
    int lo = 0;
    int hi = 0;
};

// sup over all cell intervals of ⨍ω^q (⨍ω^{-r'})^{q/r'}.
IntervalEstimate classical_offdiag_constant(LineSamples const& w, double r, double q);

struct OneSidedEstimate
{
    double value = 0.0;
    bool infinite = false;
    // Node index x and half-length m (cells) of the best pair of intervals.
    int node = 0;
    int half_cells = 0;
    // Best value for each half-length m = 1, 2, ...
    std::vector<double> per_scale;
    bool diverging = false;
};

// sup of (1/h)∫_{x-h}^x ω^q · ((1/h)∫_x^{x+h} ω^{-r'})^{q/r'} over grid
// nodes x and h = m·cell.
OneSidedEstimate one_sided_constant(LineSamples const& w, double r, double q);

// sup over full rectangles of ⨍_R ω · (⨍_R ω^{-r'})^{q/r'}.
TaEstimate script_a_constant(SampledField const& w, double r, double q,
                             RectangleFamily const& fam);

struct MeasureConditionReport
{
    double worst_margin = INFINITY;  // min over (R, E) of RHS − LHS
    std::size_t evaluated = 0;
    std::size_t violations = 0;
    std::optional<ParabolicRectangle> witness;
    std::size_t witness_subset_cells = 0;
    double witness_lhs = 0.0;
    double witness_rhs = 0.0;
};

// |E|/|R^+| ≤ C[(v^r)(E)/(u^r)(R^-)]^δ over sublevel sets {v^{-r} > λ} of
// every R^+ in the family plus `random_subsets` seeded cell subsets.
MeasureConditionReport measure_condition_check(SampledField const& u,
                                               SampledField const& v, double r,
                                               double delta, double C,
                                               double gamma,
                                               RectangleFamily const& fam,
                                               int random_subsets,
                                               std::uint64_t seed);

double conjugate_exponent(double r);

}  // namespace parawt
