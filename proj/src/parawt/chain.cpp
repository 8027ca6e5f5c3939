#include "parawt/chain.hpp"

#include <cmath>

#include "parawt/error.hpp"

namespace parawt
{
namespace
{
struct Offset
{
    std::array<double, kMaxSpaceDim> rel{};  // subcube center minus base center
    double sup = 0.0;                        // ‖rel‖_∞
    std::uint64_t steps = 0;                 // ‖rel‖_∞ / l
};

Offset subcube(ChainParams const& cp, ChainScales const& s, std::uint64_t index)
{
    int n = cp.base.n();
    double L = cp.base.half_edge;
    double l = std::ldexp(L, -s.m);
    std::uint64_t side = std::uint64_t{1} << s.m;
    std::uint64_t rest = index - 1;
    Offset o;
    std::uint64_t max_steps = 0;
    for (int a = 0; a < n; ++a)
    {
        auto digit = static_cast<std::int64_t>(rest % side);
        rest /= side;
        std::int64_t twice = 2 * digit + 1 - static_cast<std::int64_t>(side);
        o.rel[a] = static_cast<double>(twice) * l;
        max_steps = std::max<std::uint64_t>(max_steps, static_cast<std::uint64_t>(std::llabs(twice)));
    }
    o.steps = max_steps;
    o.sup = static_cast<double>(max_steps) * l;
    return o;
}

// Center moved `d` ∞-norm steps of length l toward the base center.
std::array<double, kMaxSpaceDim> walk(ChainParams const& cp, Offset const& o,
                                      std::uint64_t d, double l)
{
    std::array<double, kMaxSpaceDim> x{};
    double moved = static_cast<double>(std::min(d, o.steps)) * l;
    for (int a = 0; a < cp.base.n(); ++a)
        x[a] = cp.base.center.x[a] + o.rel[a] - moved * (o.rel[a] / o.sup);
    return x;
}

ParabolicRectangle make(ChainParams const& cp, std::array<double, kMaxSpaceDim> x,
                        double t, double l)
{
    ParabolicRectangle r;
    r.center.n = cp.base.n();
    r.center.x = x;
    r.center.t = t;
    r.half_edge = l;
    r.p = cp.base.p;
    return r;
}

double lp_of(ChainParams const& cp, ChainScales const& s)
{
    return std::pow(std::ldexp(cp.base.half_edge, -s.m), cp.base.p);
}

// Top of the future-side target slot j.
double slot_top(ChainParams const& cp, ChainScales const& s, std::uint64_t j)
{
    double Lp = cp.base.half_height();
    return cp.base.center.t + cp.gamma * Lp +
           static_cast<double>(j) * (1.0 - cp.gamma) * Lp / static_cast<double>(s.J);
}

double hub_center_time(ChainParams const& cp, ChainScales const& s)
{
    double lp = lp_of(cp, s);
    double N = std::ldexp(1.0, s.m) - 1.0;
    return slot_top(cp, s, 1) - N * cp.tau * (1.0 + cp.alpha) * lp - lp;
}
}  // namespace

ChainScales ChainScales::from(int n, double p, double gamma, double alpha, double tau)
{
    ChainScales s;
    double ratio = tau * (1.0 + alpha);
    double expr = std::log2(ratio / (1.0 - alpha)) +
                  (1.0 / (p - 1.0)) * (1.0 + std::log2(ratio / gamma)) + 2.0;
    s.m = static_cast<int>(std::ceil(expr));
    require(s.m >= 1 && n * s.m < 63, ErrorKind::parameter, "chain depth out of range");
    double Jraw = (1.0 - gamma) * std::pow(2.0, p * s.m) / (1.0 - alpha);
    require(Jraw < 9.0e15, ErrorKind::parameter, "temporal slot count out of range");
    s.J = static_cast<std::uint64_t>(std::ceil(Jraw * (1.0 - 1e-14)));
    s.subcubes = std::uint64_t{1} << (n * s.m);
    s.C1 = std::pow(2.0, p / (p - 1.0) + 3.0 * p + 1.0) *
           std::pow(ratio / (1.0 - alpha), p) * std::pow(ratio / gamma, p / (p - 1.0));
    return s;
}

ChainScales chain_scales(ChainParams const& cp)
{
    return ChainScales::from(cp.base.n(), cp.base.p, cp.gamma, cp.alpha, cp.tau);
}

void ChainParams::validate() const
{
    require(gamma > 0.0 && gamma < alpha && alpha < 1.0, ErrorKind::parameter,
            "chain needs 0 < gamma < alpha < 1");
    require(tau >= 1.0, ErrorKind::parameter, "chain needs tau >= 1");
    Params{base.n(), base.p}.validate();
    require(base.half_edge > 0.0, ErrorKind::parameter, "base half-edge must be positive");
    auto s = chain_scales(*this);
    require(i >= 1 && i <= s.subcubes && k >= 1 && k <= s.subcubes, ErrorKind::parameter,
            "subcube index out of range");
    require(j >= 1 && j <= s.J && iota >= 1 && iota <= s.J, ErrorKind::parameter,
            "temporal slot index out of range");
}

ParabolicRectangle chain_end(ChainParams const& cp)
{
    auto s = chain_scales(cp);
    double l = std::ldexp(cp.base.half_edge, -s.m);
    auto o = subcube(cp, s, cp.i);
    return make(cp, walk(cp, o, 0, l), slot_top(cp, s, cp.j) - lp_of(cp, s), l);
}

ParabolicRectangle chain_start(ChainParams const& cp)
{
    auto s = chain_scales(cp);
    double l = std::ldexp(cp.base.half_edge, -s.m);
    double lp = lp_of(cp, s);
    double Lp = cp.base.half_height();
    // Bottom of the past-side slot ι; the start rectangle's shifted
    // α-upper part begins there.
    double bottom = cp.base.center.t - Lp +
                    static_cast<double>(cp.iota - 1) * (1.0 - cp.gamma) * Lp / static_cast<double>(s.J);
    double center = bottom - cp.alpha * lp + cp.tau * (1.0 + cp.alpha) * lp;
    auto o = subcube(cp, s, cp.k);
    return make(cp, walk(cp, o, 0, l), center, l);
}

Chain build_chain(ChainParams const& cp)
{
    cp.validate();
    Chain c;
    c.params = cp;
    c.scales = chain_scales(cp);
    auto const& s = c.scales;
    c.l = std::ldexp(cp.base.half_edge, -s.m);
    double lp = lp_of(cp, s);
    double stride = cp.tau * (1.0 + cp.alpha);  // in units of l^p
    c.step = stride * lp;
    double half = std::ldexp(1.0, s.m - 1);
    std::uint64_t N = (std::uint64_t{1} << s.m) - 1;

    // Future side: from R_{i,j} down to the hub.
    auto oi = subcube(cp, s, cp.i);
    double Tj = static_cast<double>(cp.j - 1) * (1.0 - cp.gamma) *
                std::pow(2.0, cp.base.p * s.m) / static_cast<double>(s.J);
    auto extra = static_cast<std::uint64_t>(std::floor(Tj / stride));
    double xi = Tj - static_cast<double>(extra) * stride;
    c.beta_j = xi / (half * (1.0 - cp.alpha));
    c.beta_bound = 0.5 * std::pow(cp.gamma / (1.0 + cp.alpha), 1.0 / (cp.base.p - 1.0));
    c.primal_length = N + extra;
    double tj = slot_top(cp, s, cp.j);
    auto primal = [&](std::uint64_t e) {
        double de = static_cast<double>(e);
        double slack = std::min(de, half) * c.beta_j * (1.0 - cp.alpha);
        double top = tj - (de * stride + slack) * lp;
        return make(cp, walk(cp, oi, e, c.l), top - lp, c.l);
    };

    // Past side: from R̃_{k,ι} up to the hub with uniform steps.
    auto ok = subcube(cp, s, cp.k);
    ParabolicRectangle start = chain_start(cp);
    double hub_t = hub_center_time(cp, s);
    double D = (hub_t - start.center.t) / lp;
    auto dual_steps = static_cast<std::uint64_t>(std::floor(D / stride));
    require(dual_steps >= std::max<std::uint64_t>(ok.steps, 1), ErrorKind::structural,
            "past-side chain too short to reach the axis");
    double delta = (D - static_cast<double>(dual_steps) * stride) / static_cast<double>(dual_steps);
    c.dual_length = dual_steps;
    c.dual_slack = delta / (1.0 - cp.alpha);
    c.hub = make(cp, cp.base.center.x, hub_t, c.l);

    c.rects.reserve(c.dual_length + c.primal_length + 1);
    for (std::uint64_t d = 0; d <= dual_steps; ++d)
    {
        double t = start.center.t + static_cast<double>(d) * (stride + delta) * lp;
        c.rects.push_back(make(cp, walk(cp, ok, d, c.l), t, c.l));
    }
    for (std::uint64_t e = c.primal_length; e-- > 0;)
        c.rects.push_back(primal(e));
    return c;
}

namespace
{
bool same_rect(ParabolicRectangle const& a, ParabolicRectangle const& b, double slack)
{
    if (a.half_edge != b.half_edge || a.n() != b.n())
        return false;
    for (int k = 0; k < a.n(); ++k)
        if (std::abs(a.center.x[k] - b.center.x[k]) > slack)
            return false;
    return std::abs(a.center.t - b.center.t) <= slack;
}
}  // namespace

ChainReport verify_chain(Chain const& c, double slack)
{
    ChainReport rep;
    auto const& cp = c.params;
    require(!c.rects.empty() && c.rects.size() == c.dual_length + c.primal_length + 1,
            ErrorKind::structural, "chain length does not match its metadata");
    int n = cp.base.n();
    auto s = chain_scales(cp);
    double l = std::ldexp(cp.base.half_edge, -s.m);
    double step = cp.tau * (1.0 + cp.alpha) * lp_of(cp, s);
    rep.lower_bound = std::ldexp(1.0, -(n + 1));

    rep.congruent = true;
    for (auto const& r : c.rects)
        rep.congruent = rep.congruent && r.half_edge == l && r.p == cp.base.p;

    rep.endpoints_ok = same_rect(c.rects.front(), chain_start(cp), slack) &&
                       same_rect(c.rects.back(), chain_end(cp), slack);

    ParabolicRectangle hub = make(cp, cp.base.center.x, hub_center_time(cp, s), l);
    Box future = cp.base.upper(0.0);
    rep.hub_ok = same_rect(c.rects[c.dual_length], hub, slack) &&
                 future.contains(hub.full(), slack) &&
                 future.contains(hub.upper(cp.alpha).translated_time(-step), slack);

    rep.contained = true;
    Box outer = cp.base.full();
    for (std::size_t d = 0; d < c.rects.size(); ++d)
    {
        if (!outer.contains(c.rects[d].full(), slack))
        {
            rep.contained = false;
            if (!rep.first_violation)
                rep.first_violation = d;
        }
    }

    for (std::size_t d = 1; d < c.rects.size(); ++d)
    {
        Box shifted = c.rects[d].upper(cp.alpha).translated_time(-step);
        double ratio = overlap_volume(shifted, c.rects[d - 1].upper(cp.alpha)) / shifted.volume();
        rep.min_overlap = std::min(rep.min_overlap, ratio);
        rep.max_overlap = std::max(rep.max_overlap, ratio);
        if ((ratio < rep.lower_bound - slack || ratio > 1.0 + slack) && !rep.first_violation)
            rep.first_violation = d;
    }

    rep.lengths_ok = static_cast<double>(c.primal_length) <= s.C1 &&
                     static_cast<double>(c.dual_length) <= 2.0 * s.C1 &&
                     static_cast<double>(c.rects.size() - 1) <= 3.0 * s.C1;
    rep.beta_ok = c.beta_j < c.beta_bound && c.dual_slack < 0.5;

    bool overlaps_ok = rep.min_overlap >= rep.lower_bound - slack && rep.max_overlap <= 1.0 + slack;
    rep.pass = rep.congruent && rep.endpoints_ok && rep.hub_ok && rep.contained &&
               overlaps_ok && rep.lengths_ok && rep.beta_ok;
    if (!rep.congruent)
        rep.failure = "rectangles are not congruent";
    else if (!rep.endpoints_ok)
        rep.failure = "endpoints differ from the prescribed rectangles";
    else if (!rep.hub_ok)
        rep.failure = "hub rectangle misplaced";
    else if (!rep.contained)
        rep.failure = "rectangle leaves the base rectangle";
    else if (!overlaps_ok)
        rep.failure = "consecutive overlap out of range";
    else if (!rep.lengths_ok)
        rep.failure = "chain longer than the length bound";
    else if (!rep.beta_ok)
        rep.failure = "temporal slack exceeds its bound";
    return rep;
}

}  // namespace parawt
