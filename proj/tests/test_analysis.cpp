#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "parawt/analysis.hpp"
#include "parawt/error.hpp"
#include "parawt/heat.hpp"
#include "parawt/random.hpp"

using namespace parawt;

namespace
{

GridSpec grid2(int nx, int nt, double hx, double ht, double ox = 0, double ot = 0)
{
    return GridSpec::make(1, {nx, nt, 1}, {ox, ot, 0}, hx, ht);
}

std::vector<double> half_integer_ladder(double hx, int steps)
{
    std::vector<double> out;
    for (int k = 1; k <= steps; ++k)
        out.push_back((k + 0.5) * hx);
    return out;
}

SampledField positive_noise(GridSpec const& g, CounterRng& rng)
{
    SampledField f = random_noise(g, rng, g.window(), 1.0, false);
    for (auto& v : f.values)
        v += 0.2;
    return f;
}

// Dense Gaussian elimination for −Δ_h g = f with zero ghost values.
std::vector<double> steady_state(std::vector<double> const& f, double h)
{
    std::size_t n = f.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i)
    {
        a[i][i] = 2.0 / (h * h);
        if (i > 0)
            a[i][i - 1] = -1.0 / (h * h);
        if (i + 1 < n)
            a[i][i + 1] = -1.0 / (h * h);
        a[i][n] = f[i];
    }
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = c + 1; r < n; ++r)
        {
            double m = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k)
                a[r][k] -= m * a[c][k];
        }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;)
    {
        double s = a[r][n];
        for (std::size_t k = r + 1; k < n; ++k)
            s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return x;
}

}  // namespace

TEST_CASE("pointwise control constant")
{
    CHECK(pointwise_control_constant(1, 0.5, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pointwise_control_constant(1, 0.0, 1.0) == 1.0);
    CHECK(pointwise_control_constant(2, 0.5, 0.5) == doctest::Approx(std::pow(2.0, -1.0) * std::sqrt(2.0)));
}

TEST_CASE("pointwise control on zero and seeded fields")
{
    GridSpec g = grid2(32, 64, 1.0, 0.5);
    auto ladder = half_integer_ladder(1.0, 3);
    CheckReport zero = check_pointwise_control(SampledField(g, 0.0), 2.0, 0.5, 0.25, ladder);
    CHECK(zero.margin == 0.0);
    CHECK(zero.pass);

    for (int k = 0; k < 3; ++k)
    {
        CounterRng rng = CounterRng(42, "pointwise-control").substream(static_cast<std::uint64_t>(k));
        SampledField f = sample(g, random_bumps(rng, inner_box(g, 2), 3, 3, 8, 3, 10));
        CheckReport r = check_pointwise_control(f, 2.0, 0.5, 0.25, ladder);
        CHECK(r.pass);
        CHECK(r.margin >= 0.0);
    }
}

TEST_CASE("integral versus geometric mean of maximals")
{
    double C = welland_constant(1, 2.0, 0.5, 0.5, 0.25);
    CHECK(std::isfinite(C));
    CHECK(C > 1.0);

    GridSpec g = GridSpec::make(1, {32, 32, 1}, {-1, 0, 0}, 2.0 / 32, 1.0 / 32);
    CheckReport zero = check_welland(SampledField(g, 0.0), 2.0, 0.5, 0.5, 0.25, std::nullopt);
    CHECK(zero.pass);

    SampledField one(g, 0.0);
    one[g.linear({16, 20, 0})] = 1.0;
    auto ladder = welland_ladder(g, 2.0, 0.5);
    WellandScan s = welland_scan(one, 2.0, 0.5, 0.5, 0.25, ladder);
    CHECK(s.cells > 0);
    CHECK(std::isfinite(s.max_ratio));
    CHECK(s.max_ratio <= C);

    CHECK_THROWS_AS(check_welland(one, 2.0, 0.5, 0.5, 0.6, std::nullopt), Error);
}

TEST_CASE("duality identity")
{
    GridSpec g = grid2(16, 64, 1.0 / 16, 1.0 / 256);
    RectangleFamily fam = make_family(FamilySpec::lattice(), g, 2.0, 0.5);
    SampledField one(g, 1.0);
    CheckReport c = check_duality(one, one, 2.0, 2.0, 0.5, fam);
    CHECK(c.pass);

    CounterRng rng(61, "analysis-duality");
    for (double q : {2.0, 4.0})
    {
        SampledField u = positive_noise(g, rng), v = positive_noise(g, rng);
        CheckReport r = check_duality(u, v, 2.0, q, 0.5, fam);
        CHECK(r.pass);
        CHECK(r.margin >= -1e-10);
    }
    SampledField z = one;
    z[3] = 0.0;
    CHECK_THROWS_AS(check_duality(z, one, 2.0, 2.0, 0.5, fam), Error);
}

TEST_CASE("A1 characterization")
{
    GridSpec g = grid2(12, 24, 0.5, 0.125);
    RectangleFamily fam = make_family(FamilySpec::exhaustive(), g, 2.0, 0.5);
    SampledField one(g, 1.0);
    CheckReport c = check_a1_characterization(one, one, 2.0, 0.5, fam);
    CHECK(c.pass);
    CHECK(c.margin == doctest::Approx(0.0).epsilon(1e-12));

    SampledField e(g);
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = std::exp(0.5 * g.cell_center(g.unravel(i)).t);
    CHECK(check_a1_characterization(e, e, 2.0, 0.5, fam).pass);

    SampledField band = one;
    for (int i = 0; i < 12; ++i)
        band[g.linear({i, 12, 0})] = 0.0;
    CheckReport na = check_a1_characterization(one, band, 2.0, 0.5, fam);
    CHECK_FALSE(na.applicable);
    CHECK(na.pass);
}

TEST_CASE("time-lag factor")
{
    CHECK(time_lag_factor(2.0, 2.0, 0.0, 0.5) == 4.0);
    CHECK(time_lag_factor(1.0, 3.0, 0.0, 0.5) == 2.0);
}

TEST_CASE("norm ratios flag zero input")
{
    GridSpec g = grid2(16, 16, 0.25, 0.125);
    SampledField one(g, 1.0), zero(g, 0.0);
    OperatorSpec op;
    CHECK_FALSE(weak_type_ratio(one, one, zero, 2.0, 4.0, 2.0, op).has_value());
    CHECK_FALSE(strong_type_ratio(one, zero, 2.0, 4.0, 2.0, op).has_value());
}

TEST_CASE("heat solver")
{
    HeatProblem hp = HeatProblem::on_window(1.0, 8.0, 32, 256);
    SampledField g0 = heat_solve(hp);
    for (double v : g0.values)
        CHECK(v == 0.0);

    // Time-independent source even in x.
    GridSpec const& s = hp.source.spec;
    std::vector<double> f(32, 0.0);
    for (int i = 0; i < 32; ++i)
    {
        double x = s.cell_center({i, 0, 0}).x[0];
        f[static_cast<std::size_t>(i)] = std::abs(x) < 0.5 ? 1.0 - 2.0 * std::abs(x) : 0.0;
        for (int k = 0; k < 256; ++k)
            hp.source[s.linear({i, k, 0})] = f[static_cast<std::size_t>(i)];
    }
    SampledField g = heat_solve(hp);
    CHECK(heat_residual(hp, g) < 1e-8);

    std::vector<double> ss = steady_state(f, s.h_x);
    double peak = *std::max_element(ss.begin(), ss.end());
    for (int i = 0; i < 32; ++i)
        CHECK(std::abs(g.at({i, 255, 0}) - ss[static_cast<std::size_t>(i)]) <= 1e-6 * peak);

    for (int k : {0, 10, 255})
        for (int i = 0; i < 16; ++i)
            CHECK(std::abs(g.at({i, k, 0}) - g.at({31 - i, k, 0})) <= 1e-13 * peak);

    HeatProblem edge = HeatProblem::on_window(1.0, 1.0, 16, 8);
    edge.source[edge.source.spec.linear({1, 3, 0})] = 1.0;
    CHECK_THROWS_AS(heat_solve(edge), Error);
}

TEST_CASE("a-priori ratio")
{
    HeatProblem hp = HeatProblem::on_window(4.0, 4.0, 64, 512);
    hp.source = sample(hp.source.spec, {Bump{Point::make(1, {0.0, 0.0}, 1.0), 1.0, 0.5, 1.0}});
    AprioriResult a = apriori_ratio(hp, WeightSpec::constant(1.0), 1.2, 6.0);
    CHECK(std::isfinite(a.ratio));
    CHECK(a.ratio > 0.0);
    CHECK(std::abs(1 / 1.2 - 1 / 6.0 - 2.0 / 3) < 1e-12);
    try
    {
        apriori_ratio(hp, WeightSpec::constant(1.0), 2.0, 4.0);
        FAIL("expected a parameter error");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::parameter);
    }
}
