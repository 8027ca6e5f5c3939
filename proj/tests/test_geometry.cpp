#include <doctest.h>

#include <cmath>

#include "parawt/error.hpp"
#include "parawt/geometry.hpp"
#include "parawt/random.hpp"

using namespace parawt;

namespace
{

ParabolicRectangle unit_rect()
{
    return make_rectangle(Point::make(1, {0.0, 0.0}, 0.0), 1.0, 2.0);
}

ParabolicRectangle random_rect(CounterRng& rng, int n)
{
    Point c = Point::make(n, {rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(-5, 5));
    return make_rectangle(c, rng.uniform(0.05, 4.0), rng.uniform(1.1, 4.0));
}

}  // namespace

TEST_CASE("upper part of the unit rectangle")
{
    Box b = upper_part(unit_rect(), 0.5);
    CHECK(b.lo[0] == -1.0);
    CHECK(b.hi[0] == 1.0);
    CHECK(b.lo[1] == 0.5);
    CHECK(b.hi[1] == 1.0);
    CHECK(b.volume() == doctest::Approx(1.0).epsilon(1e-15));

    Box z = upper_part(unit_rect(), 0.0);
    CHECK(z.lo[1] == 0.0);
    CHECK(z.volume() == 2.0);
}

TEST_CASE("lower part of the unit rectangle")
{
    Box b = lower_part(unit_rect(), 0.5);
    CHECK(b.lo[0] == -1.0);
    CHECK(b.hi[0] == 1.0);
    CHECK(b.lo[1] == -1.0);
    CHECK(b.hi[1] == -0.5);
}

TEST_CASE("gamma outside [0,1) is a parameter error")
{
    for (double g : {-0.1, 1.0, 1.5})
    {
        try
        {
            upper_part(unit_rect(), g);
            FAIL("expected an error");
        }
        catch (Error const& e)
        {
            CHECK(e.kind() == ErrorKind::parameter);
        }
        CHECK_THROWS_AS(lower_part(unit_rect(), g), Error);
    }
}

TEST_CASE("part volumes equal 2^n(1-gamma)L^{n+p} and lower is the reflected upper")
{
    CounterRng rng(5, "geometry-volumes");
    for (int k = 0; k < 100; ++k)
    {
        int n = 1 + static_cast<int>(rng.integer(0, 1));
        ParabolicRectangle R = random_rect(rng, n);
        double g = rng.uniform(0.0, 0.99);
        double expect = std::pow(2.0, n) * (1 - g) * std::pow(R.half_edge, n + R.p);
        Box up = upper_part(R, g), lo = lower_part(R, g);
        CHECK(std::abs(up.volume() - expect) <= 1e-12 * expect);
        CHECK(std::abs(lo.volume() - up.volume()) <= 1e-12 * expect);
        Box refl = reflect_time(up, R.center.t);
        for (int a = 0; a <= n; ++a)
        {
            CHECK(refl.lo[a] == doctest::Approx(lo.lo[a]).epsilon(1e-14));
            CHECK(refl.hi[a] == doctest::Approx(lo.hi[a]).epsilon(1e-14));
        }
    }
}

TEST_CASE("upper parts shrink as gamma grows")
{
    CounterRng rng(6, "geometry-nesting");
    for (int k = 0; k < 100; ++k)
    {
        ParabolicRectangle R = random_rect(rng, 1);
        double g1 = rng.uniform(0.0, 0.9);
        double g2 = rng.uniform(g1, 0.99);
        CHECK(upper_part(R, g1).contains(upper_part(R, g2), 0.0));
    }
}

TEST_CASE("dilation")
{
    ParabolicRectangle R = unit_rect();
    ParabolicRectangle P = dilate(R, 5.0);
    CHECK(P.center == R.center);
    CHECK(P.half_edge == 5.0);
    CHECK(P.half_height() == doctest::Approx(25.0));
    CHECK(dilate(R, 1.0) == R);
    CHECK_THROWS_AS(dilate(R, 0.0), Error);
    CHECK_THROWS_AS(dilate(R, -2.0), Error);

    CounterRng rng(7, "geometry-dilate");
    for (int k = 0; k < 100; ++k)
    {
        ParabolicRectangle Q = make_rectangle(
            Point::make(1, {rng.uniform(-3, 3), 0.0}, rng.uniform(-3, 3)), rng.uniform(0.1, 2), 2.0);
        // Corner containment of R^+(γ) in (5R)^+(γ/5^p).
        Box up = upper_part(Q, 0.5);
        Box big = upper_part(dilate(Q, 5.0), 0.5 / 25.0);
        for (int corner = 0; corner < 4; ++corner)
        {
            Point c = Point::make(1, {(corner & 1) ? up.hi[0] : up.lo[0], 0.0},
                                  (corner & 2) ? up.hi[1] : up.lo[1]);
            CHECK(big.contains(c, 1e-12));
        }
        double a = rng.uniform(0.2, 3), b = rng.uniform(0.2, 3);
        ParabolicRectangle d1 = dilate(dilate(Q, a), b), d2 = dilate(Q, a * b);
        CHECK(d1.half_edge == doctest::Approx(d2.half_edge).epsilon(1e-15));
        CHECK(d1.center == d2.center);
    }
}

TEST_CASE("parabolic distance")
{
    Point o = Point::make(1, {0.0, 0.0}, 0.0);
    Point b = Point::make(1, {1.0, 0.0}, 2.0);
    CHECK(parabolic_distance(o, b, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(parabolic_distance(b, b, 2.0) == 0.0);
    CHECK(parabolic_distance(o, b, 2.0) == parabolic_distance(b, o, 2.0));

    CounterRng rng(8, "geometry-distance");
    for (int k = 0; k < 100; ++k)
    {
        double p = rng.uniform(1.1, 4.0), lam = rng.uniform(0.1, 10.0);
        Point x = Point::make(2, {rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(-2, 2));
        Point o2 = Point::make(2, {0.0, 0.0}, 0.0);
        Point xs = Point::make(2, {lam * x.x[0], lam * x.x[1]}, std::pow(lam, p) * x.t);
        double d = parabolic_distance(o2, x, p), ds = parabolic_distance(o2, xs, p);
        CHECK(std::abs(ds - lam * d) <= 1e-12 * lam * d);
    }
}

TEST_CASE("cone membership")
{
    CHECK(in_cone(Point::make(1, {1.0, 0.0}, 0.6), 0.5, 2.0, Direction::forward));
    CHECK_FALSE(in_cone(Point::make(1, {1.0, 0.0}, 0.4), 0.5, 2.0, Direction::forward));
    for (double g : {0.0, 0.3, 0.9})
        CHECK(in_cone(Point::make(1, {0.0, 0.0}, 1.0), g, 2.0, Direction::forward));
    CHECK_FALSE(in_cone(Point::make(1, {1.0, 0.0}, -0.1), 0.0, 2.0, Direction::forward));
    CHECK(in_cone(Point::make(1, {1.0, 0.0}, -0.6), 0.5, 2.0, Direction::backward));

    // Monotone in γ for t > 0.
    CounterRng rng(9, "geometry-cone");
    for (int k = 0; k < 200; ++k)
    {
        Point pt = Point::make(1, {rng.uniform(-2, 2), 0.0}, rng.uniform(0.01, 2));
        double g1 = rng.uniform(0, 0.9), g2 = rng.uniform(g1, 0.99);
        if (in_cone(pt, g2, 2.0, Direction::forward))
            CHECK(in_cone(pt, g1, 2.0, Direction::forward));
    }
}

TEST_CASE("boxes are half-open")
{
    Box b = upper_part(unit_rect(), 0.5);
    CHECK(b.contains(Point::make(1, {-1.0, 0.0}, 0.5)));
    CHECK_FALSE(b.contains(Point::make(1, {1.0, 0.0}, 0.75)));
    CHECK_FALSE(b.contains(Point::make(1, {0.0, 0.0}, 1.0)));
}
