#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "oracles.hpp"
#include "parawt/error.hpp"
#include "parawt/fields.hpp"
#include "parawt/grid.hpp"
#include "parawt/random.hpp"

using namespace parawt;

namespace
{

GridSpec grid2(int nx, int nt, double hx, double ht, double ox = 0, double ot = 0)
{
    return GridSpec::make(1, {nx, nt, 1}, {ox, ot, 0}, hx, ht);
}

Box box1(double x0, double t0, double x1, double t1)
{
    Box b;
    b.n = 1;
    b.lo = {x0, t0, 0};
    b.hi = {x1, t1, 0};
    return b;
}

SampledField random_integer_field(GridSpec const& g, CounterRng& rng, int hi)
{
    SampledField f(g);
    for (auto& v : f.values)
        v = static_cast<double>(rng.integer(0, hi));
    return f;
}

Box random_box(GridSpec const& g, CounterRng& rng)
{
    Box w = g.window();
    Box b;
    b.n = g.n;
    for (int a = 0; a < g.axes(); ++a)
    {
        double u = rng.uniform(w.lo[a], w.hi[a]), v = rng.uniform(w.lo[a], w.hi[a]);
        b.lo[a] = std::min(u, v);
        b.hi[a] = std::max(u, v) + g.h(a);
    }
    return b;
}

}  // namespace

TEST_CASE("grid spec validation")
{
    CHECK_THROWS_AS(GridSpec::make(1, {0, 4, 1}, {0, 0, 0}, 1, 1), Error);
    CHECK_THROWS_AS(GridSpec::make(1, {4, 4, 1}, {0, 0, 0}, 0, 1), Error);
    CHECK_THROWS_AS(GridSpec::make(1, {4, 4, 1}, {0, 0, 0}, 1, -1), Error);
    CHECK_THROWS_AS(GridSpec::make(3, {4, 4, 4}, {0, 0, 0}, 1, 1), Error);
    GridSpec g = GridSpec::make(2, {2, 3, 4}, {0, 0, 0}, 0.5, 0.25);
    CHECK(g.cell_volume() == 0.0625);
    CHECK(g.cell_count() == 24);
}

TEST_CASE("prefix sums: constant and single-cell fields")
{
    GridSpec g = grid2(4, 4, 0.5, 0.25);
    PrefixTable ones(SampledField(g, 1.0));
    CHECK(ones.box_sum(g.window()) == 16 * g.cell_volume());

    SampledField f(g, 0.0);
    f[g.linear({2, 3, 0})] = 1.0;
    PrefixTable t(f);
    Point c = g.cell_center({2, 3, 0});
    CHECK(t.box_sum(box1(c.x[0] - 0.1, c.t - 0.1, c.x[0] + 0.1, c.t + 0.1)) == g.cell_volume());
    CHECK(t.box_sum(g.window()) == g.cell_volume());
    CHECK(t.box_sum(box1(0, 0, 1, 0.5)) == 0.0);
}

TEST_CASE("prefix sums equal direct loops on integer fields")
{
    CounterRng rng(21, "grid-prefix");
    for (int n : {1, 2})
    {
        GridSpec g = n == 1 ? grid2(8, 8, 0.5, 0.125, -1, 0.5)
                            : GridSpec::make(2, {5, 6, 7}, {0, 0, -1}, 0.5, 0.25);
        SampledField f = random_integer_field(g, rng, 9);
        PrefixTable t(f);
        for (int k = 0; k < 50; ++k)
        {
            Box b = random_box(g, rng);
            oracle::Tally o = oracle::tally(f, b);
            CHECK(t.range_sum(snap(g, b)) == o.sum);
            if (o.count > 0)
                CHECK(box_average(t, b) == o.sum / o.count);
        }
    }
}

TEST_CASE("box averages")
{
    GridSpec g = grid2(8, 8, 0.25, 0.25);
    PrefixTable c(SampledField(g, 3.5));
    CHECK(box_average(c, box1(0.3, 0.2, 1.1, 1.7)) == 3.5);

    Box left = box1(0, 0, 1, 2);
    PrefixTable half(indicator(g, left));
    CHECK(box_average(half, g.window()) == doctest::Approx(0.5).epsilon(1e-12));

    try
    {
        box_average(c, box1(5, 5, 6, 6));
        FAIL("expected a domain error");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::domain);
    }
    try
    {
        box_average(c, box1(0.0, 0.0, 0.1, 0.1));  // contains no cell center
        FAIL("expected a degenerate-box error");
    }
    catch (Error const& e)
    {
        CHECK(e.kind() == ErrorKind::degenerate);
    }
}

TEST_CASE("box averages are monotone")
{
    CounterRng rng(22, "grid-monotone");
    GridSpec g = grid2(8, 8, 1, 1);
    for (int k = 0; k < 50; ++k)
    {
        SampledField f = random_integer_field(g, rng, 5), h = f;
        for (auto& v : h.values)
            v += static_cast<double>(rng.integer(0, 3));
        Box b = random_box(g, rng);
        if (snap(g, b).empty())
            continue;
        CHECK(box_average(PrefixTable(f), b) <= box_average(PrefixTable(h), b));
    }
}

TEST_CASE("weighted norms")
{
    GridSpec g = grid2(4, 2, 0.5, 0.5);  // volume 2·1
    SampledField one(g, 1.0);
    CHECK(weighted_norm(one, one, 3.0) == doctest::Approx(std::pow(2.0, 1.0 / 3)).epsilon(1e-14));
    CHECK(weighted_norm(SampledField(g, 0.0), one, 2.0) == 0.0);

    SampledField f(g, 0.0);
    f[0] = f[3] = f[5] = 1.0;
    CHECK(weighted_norm(f, SampledField(g, 2.0), 2.0) ==
          doctest::Approx(1.224745).epsilon(1e-6));

    CHECK_THROWS_AS(weighted_norm(f, SampledField(grid2(4, 3, 0.5, 0.5), 1.0), 2.0), Error);
}

TEST_CASE("weak norms")
{
    GridSpec g = grid2(3, 1, 1.0, 1.0);
    SampledField f(g, std::vector<double>{3, 2, 1});
    SampledField w(g, std::vector<double>{0.1, 0.2, 0.3});
    CHECK(weak_norm(f, w, 2.0) == doctest::Approx(2 * std::sqrt(0.3)).epsilon(1e-12));
    CHECK(weak_norm(SampledField(g, 0.0), w, 2.0) == 0.0);

    // Two-level function: indicator of a set of weighted measure m.
    SampledField ind(g, std::vector<double>{1, 0, 1});
    for (double q : {1.0, 2.0, 3.5})
        CHECK(weak_norm(ind, w, q) == doctest::Approx(std::pow(0.4, 1 / q)).epsilon(1e-12));
}

TEST_CASE("weak norm never exceeds the strong norm")
{
    CounterRng rng(23, "grid-chebyshev");
    GridSpec g = grid2(6, 6, 0.5, 0.25);
    for (int k = 0; k < 50; ++k)
    {
        SampledField f = random_noise(g, rng, g.window(), 3.0, false);
        SampledField w = random_noise(g, rng, g.window(), 2.0, false);
        double q = rng.uniform(1, 5);
        CHECK(weak_norm(f, w, q) <= weighted_norm(f, w, q) * (1 + 1e-12));
    }
}

TEST_CASE("field serialization round-trips bit-exactly")
{
    CounterRng rng(24, "grid-io");
    GridSpec g = GridSpec::make(2, {3, 4, 5}, {-1.25, 0.1, 7}, 0.3, 0.07);
    SampledField f = random_noise(g, rng, g.window(), 1.0, false);
    f[0] = -0.0;
    f[1] = 1e-300;

    SampledField back = decode_field(encode_field(f));
    CHECK(back.spec == f.spec);
    CHECK(std::memcmp(back.values.data(), f.values.data(), f.size() * sizeof(double)) == 0);

    SampledField csv = from_csv(to_csv(f));
    CHECK(csv.spec == f.spec);
    CHECK(csv.values == f.values);

    auto dir = std::filesystem::temp_directory_path() / "parawt_grid_io";
    std::filesystem::create_directories(dir);
    save_field(f, (dir / "f.field").string());
    CHECK(load_field((dir / "f.field").string()).values == f.values);
    save_field_csv(f, (dir / "f.csv").string());
    CHECK(load_field_csv((dir / "f.csv").string()).values == f.values);

    auto bytes = encode_field(f);
    bytes.resize(bytes.size() - 3);
    CHECK_THROWS_AS(decode_field(bytes), Error);
}

TEST_CASE("time reflection maps the window onto itself")
{
    GridSpec g = grid2(3, 4, 1, 0.5, 0, 2);
    SampledField f(g);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = static_cast<double>(i);
    SampledField r = reflect_time(f);
    CHECK(r.at({1, 0, 0}) == f.at({1, 3, 0}));
    CHECK(reflect_time(r).values == f.values);
}
