#include "parawt/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "parawt/chain.hpp"
#include "parawt/checks.hpp"
#include "parawt/error.hpp"

namespace parawt
{

using nlohmann::json;

namespace
{

json rect_record(ParabolicRectangle const& R)
{
    json c = json::array();
    for (int a = 0; a < R.n(); ++a)
        c.push_back(R.center.x[static_cast<std::size_t>(a)]);
    return {{"x", c}, {"t", R.center.t}, {"L", R.half_edge}};
}

void run_constant_estimate(JsonView const& t, ExperimentConfig const& cfg, TaskResult& out)
{
    GridSpec const& g = cfg.require_grid(t.path());
    double p = cfg.params.p;
    std::string kind = t.str("estimator", "ta");
    double gamma = t.num("gamma", 0.5);
    double r = t.num("r", 2.0), q = t.num("q", 2.0);
    FamilySpec fs = t.has("family") ? parse_family(t.at("family")) : FamilySpec::lattice();
    RectangleFamily fam = make_family(fs, g, p, gamma);
    if (fam.rects.empty())
        t.error("family", "no admissible rectangle on this grid");
    TaEstimate est;
    if (kind == "ta")
        est = ta_constant(cfg.weight(t, "u"), cfg.weight(t, "v"), g, r, q, gamma,
                          parse_direction(t, "direction"), fam);
    else if (kind == "script_a")
        est = script_a_constant(eval_weight(cfg.weight(t, "w"), g), r, q, fam);
    else
        t.error("estimator", "expected 'ta' or 'script_a'");
    out.value = est.infinite ? INFINITY : est.value;
    out.pass = true;
    out.record = {{"value", out.value}, {"infinite", est.infinite}, {"family", fam.id},
                  {"rectangles", fam.rects.size()}};
    out.record["argmax"] = est.argmax ? rect_record(*est.argmax) : json(nullptr);
}

void run_operator_eval(JsonView const& t, ExperimentConfig const& cfg, TaskResult& out)
{
    FieldEntry const& e = cfg.field(t, "field");
    double p = cfg.params.p;
    std::string op = t.str("operator");
    double gamma = t.num("gamma", 0.5);
    double beta = t.num("beta", 0.25);
    SampledField res;
    if (op == "uncentered_maximal" || op == "centered_maximal")
    {
        MaximalConfig mc;
        mc.gamma = gamma;
        mc.beta = beta;
        mc.centered = op == "centered_maximal";
        mc.direction = parse_direction(t, "direction");
        mc.min_scale = t.num("min_scale", 0.0);
        if (t.has("family"))
            mc.family = parse_family(t.at("family"));
        res = maximal(e.field, p, mc).value;
    }
    else if (op == "fractional_integral")
    {
        IntegralConfig ic;
        ic.gamma = gamma;
        ic.beta = beta;
        ic.direction = parse_direction(t, "direction");
        std::string s = t.str("singular", "skip");
        if (s == "analytic_floor")
            ic.singular = SingularPolicy::analytic_floor;
        else if (s != "skip")
            t.error("singular", "expected 'skip' or 'analytic_floor'");
        res = fractional_integral(e.field, p, ic);
    }
    else if (op == "riesz_potential")
    {
        KernelParams kp{cfg.params.n, p, beta};
        res = riesz_potential(e.field, gamma, kp);
    }
    else
        t.error("operator", "unknown operator '" + op + "'");
    double mx = 0.0, integral = 0.0;
    for (double x : res.values)
    {
        mx = std::max(mx, std::abs(x));
        integral += x;
    }
    integral *= res.spec.cell_volume();
    out.value = mx;
    out.pass = true;
    out.record = {{"max_abs", mx}, {"integral", integral}, {"cells", res.size()}};
    if (t.flag("save", true))
        out.fields.emplace_back(task_stem(out), std::move(res));
}

void run_construction(JsonView const& t, ExperimentConfig const& cfg, TaskResult& out)
{
    std::string what = t.str("construction");
    int n = cfg.params.n;
    double p = cfg.params.p;
    if (what == "chain")
    {
        ChainParams cp;
        cp.gamma = t.num("gamma", 0.25);
        cp.alpha = t.num("alpha", 0.5);
        cp.tau = t.num("tau", 1.0);
        Point c;
        c.n = n;
        cp.base = make_rectangle(c, t.num("L", 1.0), p);
        auto idx = [&](char const* k) {
            int v = t.integer(k, 1);
            if (v < 1)
                t.error(k, "indices start at 1");
            return static_cast<std::uint64_t>(v);
        };
        cp.i = idx("i");
        cp.j = idx("j");
        cp.k = idx("k");
        cp.iota = idx("iota");
        Chain ch = build_chain(cp);
        ChainReport vr = verify_chain(ch);
        json rects = json::array();
        for (auto const& R : ch.rects)
            rects.push_back(rect_record(R));
        out.value = static_cast<double>(ch.rects.size());
        out.pass = vr.pass;
        out.record = {{"m", ch.scales.m},
                      {"J", ch.scales.J},
                      {"C1", ch.scales.C1},
                      {"l", ch.l},
                      {"primal_length", ch.primal_length},
                      {"dual_length", ch.dual_length},
                      {"beta_j", ch.beta_j},
                      {"beta_bound", ch.beta_bound},
                      {"min_overlap", vr.min_overlap},
                      {"max_overlap", vr.max_overlap},
                      {"overlap_lower_bound", vr.lower_bound},
                      {"pass", vr.pass},
                      {"failure", vr.failure},
                      {"rectangles", rects}};
    }
    else if (what == "selection")
    {
        int size = t.integer("size", 200);
        if (size < 1)
            t.error("size", "must be at least 1");
        double gamma = t.num("gamma", 0.5);
        CounterRng rng = CounterRng(cfg.require_seed(t.path()), "selection")
                             .substream(static_cast<std::uint64_t>(t.integer("instance", 0)));
        Selection s = select_covering(
            random_selection_inputs(n, p, gamma, static_cast<std::size_t>(size), rng), gamma);
        SelectionReport vr = verify_selection(s);
        json sel = json::array();
        for (auto i : s.selected)
            sel.push_back({{"input", i}, {"rect", rect_record(s.inputs[i].rect)}});
        out.value = static_cast<double>(s.selected.size());
        out.pass = vr.pass;
        out.record = {{"alpha", s.alpha},
                      {"inputs", s.inputs.size()},
                      {"first_pass", s.first_pass.size()},
                      {"selected", sel},
                      {"band_violations", vr.band_violations},
                      {"uncovered_points", vr.uncovered_points},
                      {"max_overlap", vr.max_overlap},
                      {"trimmed_sets", vr.trimmed_sets},
                      {"idempotent", vr.idempotent},
                      {"C1", vr.constants.C1},
                      {"C4", vr.constants.C4},
                      {"pass", vr.pass}};
    }
    else
        t.error("construction", "expected 'chain' or 'selection'");
}

void run_check(JsonView const& t, ExperimentConfig const& cfg, TaskResult& out)
{
    std::string name = t.str("check");
    CheckInfo const* info = find_check(name);
    if (!info)
        t.error("check", "unknown check '" + name + "'");
    CheckReport rep = info->run(t, cfg);
    out.value = rep.margin;
    out.pass = rep.pass;
    out.record = report_json(rep);
}

}  // namespace

TaskResult run_task(ExperimentConfig const& cfg, std::size_t index)
{
    TaskResult out;
    out.index = index;
    json const& tj = cfg.tasks[index];
    JsonView t(tj, "tasks[" + std::to_string(index) + "]");
    out.params = tj;
    auto start = std::chrono::steady_clock::now();
    try
    {
        out.type = t.str("type");
        std::string fallback = out.type == "check" ? t.str("check", out.type) : out.type;
        out.name = t.str("name", fallback);
        if (out.type == "constant_estimate")
            run_constant_estimate(t, cfg, out);
        else if (out.type == "operator_eval")
            run_operator_eval(t, cfg, out);
        else if (out.type == "construction")
            run_construction(t, cfg, out);
        else if (out.type == "check")
            run_check(t, cfg, out);
        else
            t.error("type", "unknown task type '" + out.type + "'");
        out.ok = true;
    }
    catch (std::exception const& e)
    {
        out.ok = false;
        out.pass = false;
        out.error = e.what();
        out.fields.clear();
        if (out.name.empty())
            out.name = "task";
    }
    out.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

RunResult run_experiment(ExperimentConfig const& cfg, RunOptions const& opt)
{
    RunResult rr;
    std::size_t count = cfg.tasks.size();
    rr.tasks.resize(count);
    int jobs = std::clamp(opt.jobs, 1, 64);
    if (jobs == 1 || count < 2)
    {
        for (std::size_t i = 0; i < count; ++i)
            rr.tasks[i] = run_task(cfg, i);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < std::min<int>(jobs, static_cast<int>(count)); ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++)
                    rr.tasks[i] = run_task(cfg, i);
            });
        for (auto& th : pool)
            th.join();
    }
    for (auto const& t : rr.tasks)
        rr.all_passed = rr.all_passed && t.ok && t.pass;

    rr.out_dir = opt.out_dir.empty() ? cfg.output : opt.out_dir;
    if (!opt.write)
        return rr;
    if (rr.out_dir.empty())
        fail(ErrorKind::config, "output: no output directory (set \"output\" or pass --out)");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(rr.out_dir, ec);
    if (ec)
        fail(ErrorKind::io, "cannot create " + rr.out_dir + ": " + ec.message());
    write_text((fs::path(rr.out_dir) / "summary.csv").string(), summary_csv(rr.tasks));
    for (auto const& t : rr.tasks)
    {
        write_text((fs::path(rr.out_dir) / (task_stem(t) + ".json")).string(),
                   task_json(t).dump(2) + "\n");
        for (auto const& [stem, f] : t.fields)
            save_field(f, (fs::path(rr.out_dir) / (stem + ".field")).string());
    }
    return rr;
}

}  // namespace parawt
