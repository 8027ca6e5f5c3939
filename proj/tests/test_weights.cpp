#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "parawt/error.hpp"
#include "parawt/family.hpp"
#include "parawt/fields.hpp"
#include "parawt/random.hpp"
#include "parawt/weights.hpp"

using namespace parawt;

namespace
{

GridSpec grid2(int nx, int nt, double hx, double ht, double ox = 0, double ot = 0)
{
    return GridSpec::make(1, {nx, nt, 1}, {ox, ot, 0}, hx, ht);
}

SampledField step_weight(GridSpec const& g)
{
    SampledField w(g);
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = g.cell_center(g.unravel(i)).t > 0 ? 2.0 : 1.0;
    return w;
}

// All-interval brute force on a line: avg ω^q · (avg ω^{-r'})^{q/r'}.
double line_ratio(std::vector<double> const& w, int lo, int hi, int lo2, int hi2, double r,
                  double q)
{
    double rp = r / (r - 1);
    double a = 0.0, b = 0.0;
    for (int i = lo; i < hi; ++i)
        a += std::pow(w[static_cast<std::size_t>(i)], q);
    for (int i = lo2; i < hi2; ++i)
        b += std::pow(w[static_cast<std::size_t>(i)], -rp);
    return a / (hi - lo) * std::pow(b / (hi2 - lo2), q / rp);
}

double classical_oracle(std::vector<double> const& w, double r, double q)
{
    int n = static_cast<int>(w.size());
    double best = 0.0;
    for (int lo = 0; lo < n; ++lo)
        for (int hi = lo + 1; hi <= n; ++hi)
            best = std::max(best, line_ratio(w, lo, hi, lo, hi, r, q));
    return best;
}

double one_sided_oracle(std::vector<double> const& w, double r, double q)
{
    int n = static_cast<int>(w.size());
    double best = 0.0;
    for (int k = 1; k < n; ++k)
        for (int m = 1; k - m >= 0 && k + m <= n; ++m)
            best = std::max(best, line_ratio(w, k - m, k, k, k + m, r, q));
    return best;
}

}  // namespace

TEST_CASE("weight evaluation")
{
    GridSpec g = grid2(3, 2, 1.0, 1.0, -1.5, -0.5);  // t centers 0 and 1
    SampledField one = eval_weight(WeightSpec::constant(1.0), g);
    for (double v : one.values)
        CHECK(v == 1.0);

    SampledField e = eval_weight(WeightSpec::one_sided_exp(1.0), g);
    CHECK(e.at({1, 0, 0}) == 1.0);
    CHECK(e.at({1, 1, 0}) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));

    GridSpec pos = grid2(4, 4, 0.5, 0.5, -1.0, 0.0);
    SampledField p = eval_weight(
        WeightSpec::product(WeightSpec::spatial_power(0.0), WeightSpec::temporal_power(0.0, 0.0)), pos);
    for (double v : p.values)
        CHECK(v == 1.0);

    try
    {
        eval_weight(WeightSpec::constant(-1.0), g);
        FAIL("expected a validation error");
    }
    catch (Error const& err)
    {
        CHECK(err.kind() == ErrorKind::validation);
    }
}

TEST_CASE("two-weight constant of constant weights is one")
{
    GridSpec g = grid2(16, 16, 0.25, 0.0625);
    RectangleFamily fam = make_family(FamilySpec::lattice(), g, 2.0, 0.5);
    REQUIRE(!fam.rects.empty());
    for (double r : {1.0, 1.5, 2.0})
        for (double gamma : {0.0, 0.25, 0.5})
            for (Direction d : {Direction::forward, Direction::backward})
            {
                TaEstimate e = ta_constant(WeightSpec::constant(1.0), WeightSpec::constant(1.0), g,
                                           r, 3.0, gamma, d, fam);
                CHECK(e.value == doctest::Approx(1.0).epsilon(1e-13));
                CHECK(e.family_id == fam.id);
            }
}

TEST_CASE("step weight: exhaustive family equals the brute-force oracle")
{
    GridSpec g = grid2(8, 32, 1.0, 0.25, 0.0, -4.0);
    SampledField w = step_weight(g);
    RectangleFamily fam = make_family(FamilySpec::exhaustive(), g, 2.0, 0.5);
    auto rects = oracle::aligned_rectangles(g, 2.0, 0.5);
    CHECK(fam.rects.size() == rects.size());

    double expect = 0.0;
    for (auto const& R : rects)
        expect = std::max(expect, oracle::ta_value(w, w, 2.0, 2.0, 0.5, R));
    TaEstimate e = ta_constant(w, w, 2.0, 2.0, 0.5, Direction::forward, fam, true);
    CHECK(e.value == expect);
    REQUIRE(e.argmax.has_value());
    CHECK(oracle::ta_value(w, w, 2.0, 2.0, 0.5, *e.argmax) == expect);
    REQUIRE(e.trace.size() == fam.rects.size());
    CHECK(*std::max_element(e.trace.begin(), e.trace.end()) == e.value);
}

TEST_CASE("zero upper cell gives an infinite sentinel")
{
    GridSpec g = grid2(8, 16, 1.0, 0.5);
    SampledField u(g, 1.0), v(g, 1.0);
    v[g.linear({4, 8, 0})] = 0.0;
    RectangleFamily fam = make_family(FamilySpec::exhaustive(), g, 2.0, 0.0);
    TaEstimate e = ta_constant(u, v, 2.0, 2.0, 0.0, Direction::forward, fam);
    CHECK(e.infinite);
    CHECK(std::isinf(e.value));
    CHECK(e.argmax.has_value());

    RectangleFamily empty{"empty", 2.0, {}};
    CHECK_THROWS_AS(ta_constant(u, v, 2.0, 2.0, 0.0, Direction::forward, empty), Error);
}

TEST_CASE("time-lag factor bound")
{
    // value(γ₂) ≤ ((1−γ₁)/(1−γ₂))^{1+q/r'} value(γ₁) with γ₁ = 0, γ₂ = 0.5,
    // r = q = 2, so the factor is 4.
    CounterRng rng(31, "weights-lag");
    GridSpec g = grid2(8, 32, 1.0, 0.25, 0.0, -4.0);
    RectangleFamily fam = make_family(FamilySpec::exhaustive(), g, 2.0, 0.5);
    for (int k = 0; k < 5; ++k)
    {
        SampledField u = random_noise(g, rng, g.window(), 1.0, false);
        SampledField v = random_noise(g, rng, g.window(), 1.0, false);
        for (auto& x : u.values)
            x += 0.1;
        for (auto& x : v.values)
            x += 0.1;
        double v0 = ta_constant(u, v, 2.0, 2.0, 0.0, Direction::forward, fam).value;
        double v5 = ta_constant(u, v, 2.0, 2.0, 0.5, Direction::forward, fam).value;
        CHECK(v5 <= 4.0 * v0 * (1 + 1e-12));
    }
}

TEST_CASE("classical off-diagonal constant")
{
    LineSamples one = LineSamples::sample(WeightSpec::constant(1.0), -1.0, 0.25, 8, false);
    CHECK(classical_offdiag_constant(one, 2.0, 3.0).value == doctest::Approx(1.0).epsilon(1e-13));

    LineSamples w = LineSamples::sample(WeightSpec::spatial_power(0.25), -2.0, 4.0 / 64, 64, false);
    IntervalEstimate e = classical_offdiag_constant(w, 2.0, 2.0);
    CHECK(e.value == doctest::Approx(classical_oracle(w.values, 2.0, 2.0)).epsilon(1e-12));

    LineSamples w7 = w;
    for (auto& v : w7.values)
        v *= 7.0;
    // The weight is even, so the argmax is only defined up to ties.
    IntervalEstimate e7 = classical_offdiag_constant(w7, 2.0, 2.0);
    CHECK(e7.value == doctest::Approx(e.value).epsilon(1e-12));
    CHECK(line_ratio(w.values, e7.lo, e7.hi, e7.lo, e7.hi, 2.0, 2.0) ==
          doctest::Approx(e.value).epsilon(1e-12));
}

TEST_CASE("one-sided constant")
{
    LineSamples one = LineSamples::sample(WeightSpec::constant(1.0), 0.0, 0.5, 16, true);
    CHECK(one_sided_constant(one, 2.0, 2.0).value == doctest::Approx(1.0).epsilon(1e-13));

    LineSamples up = LineSamples::sample(WeightSpec::one_sided_exp(1.0), -4.0, 8.0 / 256, 256, true);
    OneSidedEstimate e = one_sided_constant(up, 2.0, 2.0);
    CHECK(e.value == doctest::Approx(one_sided_oracle(up.values, 2.0, 2.0)).epsilon(1e-12));
    CHECK_FALSE(e.infinite);
    CHECK_FALSE(e.diverging);

    LineSamples fine = LineSamples::sample(WeightSpec::one_sided_exp(1.0), -4.0, 8.0 / 512, 512, true);
    // The continuum constant of e^t is 1; the discrete sup sits at the
    // smallest scale and moves toward it under refinement.
    double ef = one_sided_constant(fine, 2.0, 2.0).value;
    CHECK(e.value <= 1.0);
    CHECK(ef <= 1.0);
    CHECK(ef >= e.value);
    CHECK(ef - e.value < 0.05);

    LineSamples down = LineSamples::sample(WeightSpec::one_sided_exp(-1.0), -4.0, 8.0 / 256, 256, true);
    OneSidedEstimate d = one_sided_constant(down, 2.0, 2.0);
    CHECK(d.value == doctest::Approx(one_sided_oracle(down.values, 2.0, 2.0)).epsilon(1e-12));
    CHECK(d.diverging);
    CHECK(d.per_scale.back() > 100.0 * d.per_scale.front());
}

TEST_CASE("full-rectangle constant")
{
    GridSpec g = grid2(8, 8, 1.0, 1.0);
    RectangleFamily fam = make_family(FamilySpec::exhaustive(), g, 2.0, 0.0);
    REQUIRE(!fam.rects.empty());
    CHECK(script_a_constant(SampledField(g, 1.0), 2.0, 2.0, fam).value ==
          doctest::Approx(1.0).epsilon(1e-13));
    // The first factor averages ω itself, so ω ≡ c gives c^{1−q}.
    CHECK(script_a_constant(SampledField(g, 5.0), 2.0, 2.0, fam).value ==
          doctest::Approx(0.2).epsilon(1e-13));

    CounterRng rng(32, "weights-script-a");
    SampledField w(g);
    for (auto& v : w.values)
        v = static_cast<double>(rng.integer(1, 4));
    double expect = 0.0;
    for (auto const& R : fam.rects)
    {
        oracle::Tally a = oracle::tally(w, R.full());
        SampledField inv = w;
        for (auto& v : inv.values)
            v = 1.0 / (v * v);
        double b = oracle::average(inv, R.full());
        expect = std::max(expect, a.sum / a.count * b);
    }
    CHECK(script_a_constant(w, 2.0, 2.0, fam).value == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("measure condition")
{
    GridSpec g = grid2(8, 16, 1.0, 0.5);
    RectangleFamily fam = make_family(FamilySpec::lattice(), g, 2.0, 0.5);
    REQUIRE(!fam.rects.empty());
    SampledField one(g, 1.0);
    MeasureConditionReport ok = measure_condition_check(one, one, 3.0, 0.5, 1.0, 0.5, fam, 4, 1);
    CHECK(ok.evaluated > 0);
    CHECK(ok.violations == 0);
    CHECK(ok.worst_margin >= 0.0);

    // A single rectangle and the whole upper part as the only subset.
    RectangleFamily single{"single", 2.0, {fam.rects.front()}};
    MeasureConditionReport whole =
        measure_condition_check(SampledField(g, 2.0), one, 3.0, 0.5, 1.0, 0.5, single, 0, 1);
    CHECK(whole.evaluated == 1);
    CHECK(whole.witness_lhs == 1.0);
    oracle::Tally up = oracle::tally(one, oracle::upper(single.rects[0], 0.5));
    oracle::Tally lo = oracle::tally(one, oracle::lower(single.rects[0], 0.5));
    double rhs = std::pow(up.count / (8.0 * lo.count), 0.5);
    CHECK(whole.witness_rhs == doctest::Approx(rhs).epsilon(1e-13));
    CHECK(whole.worst_margin == doctest::Approx(rhs - 1.0).epsilon(1e-13));

    // v vanishing on an interior plateau.
    SampledField v(g, 1.0);
    for (int i = 2; i < 6; ++i)
        for (int j = 6; j < 12; ++j)
            v[g.linear({i, j, 0})] = 0.0;
    RectangleFamily all = make_family(FamilySpec::exhaustive(), g, 2.0, 0.5);
    MeasureConditionReport bad = measure_condition_check(one, v, 3.0, 0.5, 1.0, 0.5, all, 4, 1);
    CHECK(bad.violations > 0);
    CHECK(bad.worst_margin < 0.0);
    CHECK(bad.witness.has_value());

    CHECK_THROWS_AS(measure_condition_check(one, one, 1.5, 0.5, 1.0, 0.5, fam, 0, 1), Error);
}

TEST_CASE("conjugate exponents")
{
    CHECK(conjugate_exponent(2.0) == 2.0);
    CHECK(conjugate_exponent(4.0) == doctest::Approx(4.0 / 3));
    CHECK(std::isinf(conjugate_exponent(1.0)));
}
