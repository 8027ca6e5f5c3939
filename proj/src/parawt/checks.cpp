#include "parawt/checks.hpp"

#include <algorithm>
#include <cmath>

#include "parawt/error.hpp"

namespace parawt
{

using nlohmann::json;

CheckReport combine_reports(std::string const& name, json params,
                            std::vector<CheckReport> const& parts)
{
    CheckReport out;
    out.name = name;
    out.params = std::move(params);
    out.applicable = false;
    out.pass = true;
    double worst = INFINITY;
    std::size_t worst_idx = 0;
    json margins = json::array();
    std::size_t violations = 0;
    for (std::size_t i = 0; i < parts.size(); ++i)
    {
        auto const& r = parts[i];
        margins.push_back(r.margin);
        out.pass = out.pass && r.pass;
        out.tolerance = std::max(out.tolerance, r.tolerance);
        if (r.details.contains("violations") && r.details["violations"].is_number())
            violations += r.details["violations"].get<std::size_t>();
        if (!r.applicable)
            continue;
        out.applicable = true;
        if (r.margin < worst)
        {
            worst = r.margin;
            worst_idx = i;
        }
    }
    out.margin = out.applicable ? worst : 0.0;
    if (out.applicable)
    {
        out.witness = parts[worst_idx].witness;
        out.details = {{"instances", parts.size()},
                       {"worst_instance", worst_idx},
                       {"worst", parts[worst_idx].details},
                       {"margins", margins},
                       {"violations", violations}};
    }
    else
        out.details = {{"instances", parts.size()}};
    return out;
}

namespace
{

SampledField weight_on(ExperimentConfig const& cfg, JsonView const& t, std::string const& key,
                       GridSpec const& g)
{
    if (!t.has(key))
        return SampledField(g, 1.0);
    return eval_weight(cfg.weight(t, key), g);
}

RectangleFamily family_for(JsonView const& t, GridSpec const& g, double p, double gamma)
{
    FamilySpec fs = t.has("family") ? parse_family(t.at("family")) : FamilySpec::lattice();
    RectangleFamily fam = make_family(fs, g, p, gamma);
    if (fam.rects.empty())
        t.error("family", "no admissible rectangle on this grid");
    return fam;
}

std::vector<double> ladder_for(JsonView const& t, GridSpec const& g, double p)
{
    if (t.has("ladder"))
    {
        auto l = t.nums("ladder");
        if (l.empty() || std::any_of(l.begin(), l.end(), [](double x) { return !(x > 0.0); }))
            t.error("ladder", "expected positive half-edges");
        return l;
    }
    return scale_ladder(FamilySpec::lattice(), g, p);
}

json weight_names(JsonView const& t, std::initializer_list<char const*> keys)
{
    json j = json::object();
    for (char const* k : keys)
        j[k] = t.str(k, "one");
    return j;
}

// ---- operator inequalities ----------------------------------------------

CheckReport run_pointwise_control(JsonView const& t, ExperimentConfig const& cfg)
{
    GridSpec const& g = cfg.require_grid(t.path());
    double p = cfg.params.p;
    double gamma = t.num("gamma", 0.5);
    double beta = t.num("beta", 0.25);
    double slack = t.num("slack", 0.05);
    std::vector<double> ladder;
    if (t.has("ladder"))
        ladder = ladder_for(t, g, p);
    else
        for (int k = 1; k <= t.integer("ladder_steps", 3); ++k)
            ladder.push_back((k + 0.5) * g.h_x);  // off the cell faces
    if (t.has("field"))
    {
        FieldEntry const& e = cfg.field(t, "field");
        return check_pointwise_control(e.field, p, gamma, beta, ladder, slack);
    }
    BumpDraw d{3, 3.0, 8.0, 3.0, 10.0, 2, "pointwise-control"};
    int count = 1;
    if (t.has("random_fields"))
    {
        d = BumpDraw::parse(t.at("random_fields"), d);
        count = t.at("random_fields").integer("fields", 100);
    }
    std::uint64_t seed = cfg.require_seed(t.path());
    std::vector<CheckReport> parts;
    for (int k = 0; k < count; ++k)
    {
        SampledField f = sample(g, d.draw(g, seed, static_cast<std::uint64_t>(k)));
        parts.push_back(check_pointwise_control(f, p, gamma, beta, ladder, slack));
    }
    return combine_reports("check_pointwise_control",
                           {{"p", p}, {"gamma", gamma}, {"beta", beta}, {"slack", slack},
                            {"ladder", ladder}, {"fields", count}, {"seed", seed},
                            {"stream", d.stream}},
                           parts);
}

CheckReport run_welland(JsonView const& t, ExperimentConfig const& cfg)
{
    double p = cfg.params.p;
    double gamma = t.num("gamma", 0.5);
    double beta = t.num("beta", 0.5);
    double eps = t.num("epsilon", 0.25);
    double drift_tol = t.num("drift_tol", 0.2);
    if (t.has("field"))
    {
        FieldEntry const& e = cfg.field(t, "field");
        return check_welland(e.field, p, gamma, beta, eps, std::nullopt, drift_tol);
    }
    // Seeded bumps on [−1,1]^n × [0,1], compared at two resolutions.
    int n = cfg.params.n;
    int count = 50, res = 32;
    BumpDraw d{2, 0.3, 0.6, 0.25, 0.45, 0, "welland"};
    if (t.has("random_fields"))
    {
        JsonView rf = t.at("random_fields");
        d = BumpDraw::parse(rf, d);
        count = rf.integer("fields", count);
        res = rf.integer("resolution", res);
        if (res < 4)
            rf.error("resolution", "must be at least 4");
    }
    bool refine = t.flag("refine", true);
    auto grid_at = [&](int r) {
        std::array<int, kMaxAxes> shape{r, r, r};
        std::array<double, kMaxAxes> origin{-1.0, -1.0, -1.0};
        origin[static_cast<std::size_t>(n)] = 0.0;
        return GridSpec::make(n, shape, origin, 2.0 / r, 1.0 / r);
    };
    GridSpec g = grid_at(res);
    GridSpec fine = grid_at(2 * res);
    std::uint64_t seed = cfg.require_seed(t.path());
    std::vector<CheckReport> parts;
    for (int k = 0; k < count; ++k)
    {
        CounterRng rng = CounterRng(seed, d.stream).substream(static_cast<std::uint64_t>(k));
        auto bumps = random_bumps(rng, g.window(), d.count, d.rx_min, d.rx_max, d.rt_min, d.rt_max);
        std::optional<SampledField> refined;
        if (refine)
            refined = sample(fine, bumps);
        parts.push_back(check_welland(sample(g, bumps), p, gamma, beta, eps, refined, drift_tol));
    }
    return combine_reports("check_welland",
                           {{"p", p}, {"gamma", gamma}, {"beta", beta}, {"epsilon", eps},
                            {"fields", count}, {"resolution", res}, {"refine", refine},
                            {"drift_tol", drift_tol}, {"seed", seed}},
                           parts);
}

CheckReport run_centered_vs_shifted(JsonView const& t, ExperimentConfig const& cfg)
{
    FieldEntry const& e = cfg.field(t, "field");
    double p = cfg.params.p;
    auto ladder = ladder_for(t, e.field.spec, p);
    return check_centered_vs_shifted(e.field, p, t.num("gamma", 0.5), t.num("beta", 0.25), ladder);
}

// ---- weight classes -----------------------------------------------------

CheckReport run_duality(JsonView const& t, ExperimentConfig const& cfg)
{
    GridSpec const& g = cfg.require_grid(t.path());
    double p = cfg.params.p;
    double r = t.num("r", 2.0), q = t.num("q", 4.0), gamma = t.num("gamma", 0.5);
    double tol = t.num("tol", 1e-10);
    RectangleFamily fam = family_for(t, g, p, gamma);
    if (t.has("u") || t.has("v"))
    {
        auto rep = check_duality(weight_on(cfg, t, "u", g), weight_on(cfg, t, "v", g), r, q,
                                 gamma, fam, tol);
        rep.params.update(weight_names(t, {"u", "v"}));
        return rep;
    }
    // Seeded positive weights 0.5 + U[0,1).
    int pairs = t.integer("pairs", 50);
    std::uint64_t seed = cfg.require_seed(t.path());
    std::vector<CheckReport> parts;
    for (int k = 0; k < pairs; ++k)
    {
        CounterRng rng = CounterRng(seed, "duality").substream(static_cast<std::uint64_t>(k));
        SampledField u = random_noise(g, rng, g.window(), 1.0, false);
        SampledField v = random_noise(g, rng, g.window(), 1.0, false);
        for (auto& x : u.values)
            x += 0.5;
        for (auto& x : v.values)
            x += 0.5;
        parts.push_back(check_duality(u, v, r, q, gamma, fam, tol));
    }
    return combine_reports("check_duality",
                           {{"r", r}, {"q", q}, {"gamma", gamma}, {"pairs", pairs},
                            {"family", fam.id}, {"rectangles", fam.rects.size()},
                            {"seed", seed}},
                           parts);
}

template <class F>
CheckReport with_weights(JsonView const& t, ExperimentConfig const& cfg,
                         std::initializer_list<char const*> keys, F&& fn)
{
    GridSpec const& g = cfg.require_grid(t.path());
    CheckReport rep = fn(g);
    rep.params.update(weight_names(t, keys));
    return rep;
}

CheckReport run_a1(JsonView const& t, ExperimentConfig const& cfg)
{
    return with_weights(t, cfg, {"u", "v"}, [&](GridSpec const& g) {
        double gamma = t.num("gamma", 0.5);
        return check_a1_characterization(weight_on(cfg, t, "u", g), weight_on(cfg, t, "v", g),
                                         t.num("q", 2.0), gamma,
                                         family_for(t, g, cfg.params.p, gamma));
    });
}

CheckReport run_time_lag(JsonView const& t, ExperimentConfig const& cfg)
{
    return with_weights(t, cfg, {"u", "v"}, [&](GridSpec const& g) {
        double g1 = t.num("gamma1", 0.25), g2 = t.num("gamma2", 0.5);
        return check_time_lag_factor(weight_on(cfg, t, "u", g), weight_on(cfg, t, "v", g),
                                     t.num("r", 2.0), t.num("q", 4.0), g1, g2,
                                     family_for(t, g, cfg.params.p, std::max(g1, g2)));
    });
}

CheckReport run_nested_r(JsonView const& t, ExperimentConfig const& cfg)
{
    return with_weights(t, cfg, {"u", "v"}, [&](GridSpec const& g) {
        double gamma = t.num("gamma", 0.5);
        return check_nested_r(weight_on(cfg, t, "u", g), weight_on(cfg, t, "v", g),
                              t.num("r_small", 1.5), t.num("r", 2.0), t.num("q", 4.0), gamma,
                              family_for(t, g, cfg.params.p, gamma));
    });
}

CheckReport run_nested_q(JsonView const& t, ExperimentConfig const& cfg)
{
    return with_weights(t, cfg, {"u", "v"}, [&](GridSpec const& g) {
        double gamma = t.num("gamma", 0.5);
        return check_nested_q(weight_on(cfg, t, "u", g), weight_on(cfg, t, "v", g),
                              t.num("r", 2.0), t.num("q_small", 3.0), t.num("q", 4.0), gamma,
                              family_for(t, g, cfg.params.p, gamma));
    });
}

CheckReport run_max_min(JsonView const& t, ExperimentConfig const& cfg)
{
    return with_weights(t, cfg, {"u", "v", "u2", "v2"}, [&](GridSpec const& g) {
        double gamma = t.num("gamma", 0.5);
        return check_max_min_closure(weight_on(cfg, t, "u", g), weight_on(cfg, t, "v", g),
                                     weight_on(cfg, t, "u2", g), weight_on(cfg, t, "v2", g),
                                     t.num("r", 2.0), t.num("q", 4.0), gamma,
                                     family_for(t, g, cfg.params.p, gamma));
    });
}

CheckReport run_measure(JsonView const& t, ExperimentConfig const& cfg)
{
    return with_weights(t, cfg, {"u", "v"}, [&](GridSpec const& g) {
        double gamma = t.num("gamma", 0.5);
        int subsets = t.integer("random_subsets", 16);
        std::uint64_t seed = subsets > 0 ? cfg.require_seed(t.path()) : cfg.seed.value_or(0);
        return check_measure_condition(weight_on(cfg, t, "u", g), weight_on(cfg, t, "v", g),
                                       t.num("r", 2.0), t.num("delta", 0.5), t.num("C", 1.0),
                                       gamma, family_for(t, g, cfg.params.p, gamma), subsets,
                                       seed);
    });
}

CheckReport run_self_improvement(JsonView const& t, ExperimentConfig const& cfg)
{
    return with_weights(t, cfg, {"u", "v"}, [&](GridSpec const& g) {
        double gamma = t.num("gamma", 0.5);
        return check_self_improvement(weight_on(cfg, t, "u", g), weight_on(cfg, t, "v", g),
                                      t.num("r", 2.0), t.num("q", 4.0), gamma,
                                      family_for(t, g, cfg.params.p, gamma),
                                      t.nums("deltas", {0.05, 0.1, 0.2}));
    });
}

// ---- constructions ------------------------------------------------------

CheckReport run_chain(JsonView const& t, ExperimentConfig const& cfg)
{
    return check_chain(cfg.params.n, cfg.params.p, t.num("gamma", 0.25), t.num("alpha", 0.5),
                       t.num("tau", 1.0), t.integer("count", 100), cfg.require_seed(t.path()));
}

CheckReport run_selection(JsonView const& t, ExperimentConfig const& cfg)
{
    int size = t.integer("size", 200);
    if (size < 1)
        t.error("size", "must be at least 1");
    return check_selection(cfg.params.n, cfg.params.p, t.num("gamma", 0.5),
                           static_cast<std::size_t>(size), t.integer("instances", 5),
                           cfg.require_seed(t.path()));
}

// ---- kernels ------------------------------------------------------------

KernelParams kernel_params(JsonView const& t, ExperimentConfig const& cfg, double beta)
{
    KernelParams kp{cfg.params.n, cfg.params.p, t.num("beta", beta)};
    try
    {
        kp.validate();
    }
    catch (Error const& e)
    {
        t.error("beta", e.what());
    }
    return kp;
}

CheckReport run_kernel_equivalence(JsonView const& t, ExperimentConfig const& cfg)
{
    int samples = t.integer("samples", 10000);
    return check_kernel_equivalence(t.num("gamma", 0.5), kernel_params(t, cfg, 2.0),
                                    static_cast<std::size_t>(std::max(samples, 1)),
                                    cfg.require_seed(t.path()));
}

CheckReport run_riesz_domination(JsonView const& t, ExperimentConfig const& cfg)
{
    FieldEntry const& e = cfg.field(t, "field");
    return check_riesz_domination(e.field, t.num("gamma", 0.5), kernel_params(t, cfg, 1.0));
}

CheckReport run_shell_domination(JsonView const& t, ExperimentConfig const& cfg)
{
    int samples = t.integer("samples", 1000);
    return check_shell_domination(t.num("gamma", 0.5), kernel_params(t, cfg, 2.0),
                                  t.integer("shells", 3),
                                  static_cast<std::size_t>(std::max(samples, 1)),
                                  cfg.require_seed(t.path()));
}

// ---- scaling and norm ratios ----------------------------------------------

std::vector<Bump> const& bumps_of(JsonView const& t, ExperimentConfig const& cfg)
{
    FieldEntry const& e = cfg.field(t, "field");
    if (!e.bumps)
        t.error("field", "needs a field built from bumps");
    return *e.bumps;
}

CheckReport run_scaling(JsonView const& t, ExperimentConfig const& cfg)
{
    auto const& bumps = bumps_of(t, cfg);
    return check_scaling_covariance(cfg.require_grid(t.path()), cfg.params.p, bumps,
                                    t.num("lambda", 2.0), t.num("gamma", 0.5),
                                    t.num("beta", 0.25), t.num("integral_tol", 0.02));
}

CheckReport run_norm_ratio(JsonView const& t, ExperimentConfig const& cfg, bool weak)
{
    auto const& bumps = bumps_of(t, cfg);
    double r = t.num("r", 2.0), q = t.num("q", 4.0);
    OperatorSpec op;
    op.kind = t.has("operator") ? parse_operator(t, "operator") : OperatorKind::uncentered_maximal;
    op.gamma = t.num("gamma", 0.5);
    op.beta = t.num("beta", 1.0 / r - 1.0 / q);
    if (t.has("family"))
        op.family = parse_family(t.at("family"));
    return check_norm_ratio_spread(cfg.require_grid(t.path()), cfg.params.p, bumps,
                                   t.nums("lambdas", {1.0, 2.0, 4.0}), weak, r, q, op,
                                   t.num("max_spread", 2.0));
}

// ---- heat -----------------------------------------------------------------

CheckReport run_apriori(JsonView const& t, ExperimentConfig const& cfg)
{
    if (cfg.params.n != 1)
        t.error("", "the heat solver is one-dimensional in space");
    HeatSetup hs;
    hs.X = t.num("X", 4.0);
    hs.T = t.num("T", 4.0);
    if (t.has("source"))
    {
        JsonView s = t.at("source");
        if (!s.is_array())
            s.error("", "expected an array of bumps");
        for (std::size_t i = 0; i < s.size(); ++i)
            hs.source.push_back(parse_bump(s.at(i), 1));
    }
    else
        hs.source.push_back(Bump{Point::make(1, {0.0, 0.0}, 1.0), 1.0, 0.5, 1.0});
    WeightSpec w = t.has("weight") ? cfg.weight(t, "weight") : WeightSpec::constant(1.0);
    auto rep = check_apriori(hs, w, t.num("r", 1.2), t.num("q", 6.0),
                             t.ints("nx", {64, 128}), t.integer("nt", 512),
                             t.nums("lambdas", {1.0, 2.0, 4.0}), t.num("drift_tol", 0.2),
                             t.num("max_spread", 2.0));
    rep.params["weight"] = t.str("weight", "one");
    return rep;
}

std::vector<CheckInfo> build_registry()
{
    std::vector<CheckInfo> r = {
        {"check_pointwise_control",
         "centered M^{γ+}_β f ≤ 2^{n(β−1)}(1−γ)^{β−1}·I^{γ+}_β|f| cellwise (quadrature slack)",
         run_pointwise_control},
        {"check_welland",
         "I^{γ+}_β|f| ≤ C·[M^{γ²+}_{β−ε} f · M^{γ²+}_{β+ε} f]^{1/2}, C the two slab constants",
         run_welland},
        {"check_centered_vs_shifted",
         "uncentered M^{γ+}_β f bounded by the shifted centered maximal",
         run_centered_vs_shifted},
        {"check_duality", "Φ^-(v^{-1},u^{-1}; q',r') = Φ^+(u,v; r,q)^{r'/q} per rectangle",
         run_duality},
        {"check_a1_characterization", "M^{γ−}_0(u^q) ≤ [u,v]_{TA_{1,q}^+(γ)}·v^q cellwise",
         run_a1},
        {"check_time_lag_factor",
         "[u,v](γ₂) ≤ ((1−γ₁)/(1−γ₂))^{1+q/r'}·[u,v](γ₁) for γ₁ ≤ γ₂", run_time_lag},
        {"check_nested_r", "TA_{r₀,q}^+ ⊂ TA_{r,q}^+ for r₀ < r ≤ q", run_nested_r},
        {"check_nested_q", "[u,v]_{r,q₀} ≤ [u,v]_{r,q}^{q₀/q} for r ≤ q₀ < q", run_nested_q},
        {"check_max_min_closure",
         "[max(u,ũ),max(v,ṽ)] ≤ [u,v] + [ũ,ṽ]; for r = 1 the min pair too", run_max_min},
        {"check_measure_condition", "|E|/|R^+| ≤ C[(v^r)(E)/(u^r)(R^-)]^δ for E ⊂ R^+",
         run_measure},
        {"check_self_improvement", "the family estimate stays finite at q+δ", run_self_improvement},
        {"check_chain",
         "chain endpoints, containment, overlap ratios in [2^{-(n+1)}, 1], length ≤ 3C₁",
         run_chain},
        {"check_selection",
         "same-band lower parts disjoint, points covered by ∪P_i^-(α), ∑1_{F_i} ≤ C₄, idempotent",
         run_selection},
        {"check_kernel_equivalence",
         "h_β·d_p^{(n+p)(1−β̃)} is parabolic-scale invariant and bounded above and below on "
         "the cone",
         run_kernel_equivalence},
        {"check_riesz_domination", "𝓘^{0+}_β|f| ≥ 𝓘^{γ+}_β|f| cellwise", run_riesz_domination},
        {"check_shell_domination",
         "kernel bounds on the shells Ω(γ/2^{j+1}) \\ Ω(γ/2^j)", run_shell_domination},
        {"check_scaling_covariance",
         "M(f_λ)(x,t) = λ^{−(n+p)β} M(f)(λx, λ^p t); fractional integral to quadrature tolerance",
         run_scaling},
        {"check_weak_type",
         "‖Op f‖_{L^{q,∞}} / ‖f‖_{L^r} stable across parabolic rescalings of f",
         [](JsonView const& t, ExperimentConfig const& c) { return run_norm_ratio(t, c, true); }},
        {"check_strong_type",
         "‖Op f‖_{L^q} / ‖f‖_{L^r} stable across parabolic rescalings of f",
         [](JsonView const& t, ExperimentConfig const& c) { return run_norm_ratio(t, c, false); }},
        {"check_apriori",
         "‖g‖_{L^q(w^q)} ≤ C‖f‖_{L^r(w^r)} for g_t − g_xx = f, 1/r − 1/q = 2/3: stable under "
         "refinement and rescaling",
         run_apriori},
    };
    return r;
}

}  // namespace

std::span<CheckInfo const> check_registry()
{
    static std::vector<CheckInfo> const reg = build_registry();
    return reg;
}

CheckInfo const* find_check(std::string const& name)
{
    for (auto const& c : check_registry())
        if (c.name == name)
            return &c;
    return nullptr;
}

}  // namespace parawt
