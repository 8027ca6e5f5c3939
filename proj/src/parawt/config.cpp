#include "parawt/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "parawt/error.hpp"

namespace parawt
{

using nlohmann::json;

std::string JsonView::child(std::string const& key) const
{
    return path_.empty() ? key : path_ + "." + key;
}

void JsonView::error(std::string const& key, std::string const& msg) const
{
    std::string where = key.empty() ? (path_.empty() ? std::string("<root>") : path_) : child(key);
    fail(ErrorKind::config, where + ": " + msg);
}

bool JsonView::has(std::string const& key) const
{
    return j_->is_object() && j_->contains(key) && !(*j_)[key].is_null();
}

JsonView JsonView::at(std::string const& key) const
{
    if (!j_->is_object())
        error("", "expected an object");
    if (!has(key))
        error(key, "missing");
    return JsonView((*j_)[key], child(key));
}

JsonView JsonView::at(std::size_t i) const
{
    if (!j_->is_array() || i >= j_->size())
        error("", "index " + std::to_string(i) + " out of range");
    return JsonView((*j_)[i], path_ + "[" + std::to_string(i) + "]");
}

std::size_t JsonView::size() const
{
    return j_->is_array() || j_->is_object() ? j_->size() : 0;
}

double JsonView::num(std::string const& key) const
{
    JsonView v = at(key);
    if (!v.raw().is_number())
        error(key, "expected a number");
    return v.raw().get<double>();
}

double JsonView::num(std::string const& key, double fallback) const
{
    return has(key) ? num(key) : fallback;
}

int JsonView::integer(std::string const& key) const
{
    JsonView v = at(key);
    if (!v.raw().is_number_integer())
        error(key, "expected an integer");
    return v.raw().get<int>();
}

int JsonView::integer(std::string const& key, int fallback) const
{
    return has(key) ? integer(key) : fallback;
}

std::uint64_t JsonView::seed(std::string const& key) const
{
    JsonView v = at(key);
    if (!v.raw().is_number_unsigned() && !(v.raw().is_number_integer() && v.raw().get<std::int64_t>() >= 0))
        error(key, "expected a non-negative integer");
    return v.raw().get<std::uint64_t>();
}

std::string JsonView::str(std::string const& key) const
{
    JsonView v = at(key);
    if (!v.raw().is_string())
        error(key, "expected a string");
    return v.raw().get<std::string>();
}

std::string JsonView::str(std::string const& key, std::string const& fallback) const
{
    return has(key) ? str(key) : fallback;
}

bool JsonView::flag(std::string const& key, bool fallback) const
{
    if (!has(key))
        return fallback;
    JsonView v = at(key);
    if (!v.raw().is_boolean())
        error(key, "expected true or false");
    return v.raw().get<bool>();
}

std::vector<double> JsonView::nums(std::string const& key) const
{
    JsonView v = at(key);
    if (!v.raw().is_array())
        error(key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (!v.raw()[i].is_number())
            v.at(i).error("", "expected a number");
        out.push_back(v.raw()[i].get<double>());
    }
    return out;
}

std::vector<double> JsonView::nums(std::string const& key, std::vector<double> fallback) const
{
    return has(key) ? nums(key) : fallback;
}

std::vector<int> JsonView::ints(std::string const& key, std::vector<int> fallback) const
{
    if (!has(key))
        return fallback;
    JsonView v = at(key);
    if (!v.raw().is_array())
        error(key, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        if (!v.raw()[i].is_number_integer())
            v.at(i).error("", "expected an integer");
        out.push_back(v.raw()[i].get<int>());
    }
    return out;
}

namespace
{

template <class F>
auto wrap(JsonView const& v, F&& fn) -> decltype(fn())
{
    // Re-tag library errors (invalid spacing, γ out of range, ...) with the path.
    try
    {
        return fn();
    }
    catch (Error const& e)
    {
        if (e.kind() == ErrorKind::config)
            throw;
        v.error("", e.what());
    }
}

std::array<double, kMaxAxes> coords(JsonView const& v, std::string const& key, int n,
                                    std::optional<std::array<double, kMaxAxes>> fallback)
{
    if (!v.has(key))
    {
        if (!fallback)
            v.error(key, "missing");
        return *fallback;
    }
    auto c = v.nums(key);
    if (static_cast<int>(c.size()) != n + 1)
        v.error(key, "expected " + std::to_string(n + 1) + " coordinates (space then time)");
    std::array<double, kMaxAxes> out{};
    for (int a = 0; a <= n; ++a)
        out[static_cast<std::size_t>(a)] = c[static_cast<std::size_t>(a)];
    return out;
}

Point to_point(std::array<double, kMaxAxes> const& c, int n)
{
    Point pt;
    pt.n = n;
    for (int a = 0; a <= n; ++a)
        pt.set_coord(a, c[static_cast<std::size_t>(a)]);
    return pt;
}

}  // namespace

GridSpec parse_grid(JsonView const& v, Params const& prm)
{
    auto shape = v.ints("shape", {});
    if (static_cast<int>(shape.size()) != prm.n + 1)
        v.error("shape", "expected " + std::to_string(prm.n + 1) + " cell counts (space then time)");
    std::array<int, kMaxAxes> sh{1, 1, 1};
    for (int a = 0; a <= prm.n; ++a)
        sh[static_cast<std::size_t>(a)] = shape[static_cast<std::size_t>(a)];
    auto origin = coords(v, "origin", prm.n, std::array<double, kMaxAxes>{});
    double hx = v.num("h_x");
    double ht = v.num("h_t");
    if (!(hx > 0.0) || !std::isfinite(hx))
        v.error("h_x", "spacing must be positive");
    if (!(ht > 0.0) || !std::isfinite(ht))
        v.error("h_t", "spacing must be positive");
    return wrap(v, [&] { return GridSpec::make(prm.n, sh, origin, hx, ht); });
}

WeightSpec parse_weight(JsonView const& v)
{
    std::string kind = v.str("kind");
    if (kind == "constant")
        return WeightSpec::constant(v.num("c", 1.0));
    if (kind == "temporal_power")
        return WeightSpec::temporal_power(v.num("t0", 0.0), v.num("a"));
    if (kind == "spatial_power")
        return WeightSpec::spatial_power(v.num("a"));
    if (kind == "one_sided_exp")
        return WeightSpec::one_sided_exp(v.num("lambda"));
    if (kind == "product")
        return WeightSpec::product(parse_weight(v.at("spatial")), parse_weight(v.at("temporal")));
    v.error("kind", "unknown weight kind '" + kind + "'");
}

FamilySpec parse_family(JsonView const& v)
{
    std::string kind = v.str("kind", "lattice");
    FamilySpec fs;
    if (kind == "lattice")
        fs = FamilySpec::lattice();
    else if (kind == "exhaustive")
        fs = FamilySpec::exhaustive();
    else if (kind == "aligned")
        fs = FamilySpec::aligned(v.integer("k_max"));
    else if (kind == "random")
    {
        fs.centers = FamilySpec::Centers::random;
        fs.random_count = v.integer("count");
        fs.seed = v.seed("seed");
    }
    else
        v.error("kind", "unknown family kind '" + kind + "'");
    if (kind == "lattice" || kind == "random")
    {
        fs.center_stride = v.integer("center_stride", fs.center_stride);
        fs.ratio = v.num("ratio", fs.ratio);
        fs.l_min = v.num("l_min", fs.l_min);
        fs.l_max = v.num("l_max", fs.l_max);
        if (fs.center_stride < 1)
            v.error("center_stride", "must be at least 1");
        if (fs.ratio <= 1.0)
            v.error("ratio", "must exceed 1");
    }
    return fs;
}

Bump parse_bump(JsonView const& v, int n)
{
    Bump b;
    b.center = to_point(coords(v, "center", n, std::nullopt), n);
    b.radius_x = v.num("radius_x", 1.0);
    b.radius_t = v.num("radius_t", 1.0);
    b.amplitude = v.num("amplitude", 1.0);
    if (b.radius_x <= 0.0)
        v.error("radius_x", "must be positive");
    if (b.radius_t <= 0.0)
        v.error("radius_t", "must be positive");
    return b;
}

Box parse_box(JsonView const& v, int n)
{
    Box b;
    b.n = n;
    b.lo = coords(v, "lo", n, std::nullopt);
    b.hi = coords(v, "hi", n, std::nullopt);
    for (int a = 0; a <= n; ++a)
        if (!(b.lo[static_cast<std::size_t>(a)] < b.hi[static_cast<std::size_t>(a)]))
            v.error("hi", "must exceed lo on every axis");
    return b;
}

Direction parse_direction(JsonView const& v, std::string const& key)
{
    std::string d = v.str(key, "forward");
    if (d == "forward")
        return Direction::forward;
    if (d == "backward")
        return Direction::backward;
    v.error(key, "expected 'forward' or 'backward'");
}

OperatorKind parse_operator(JsonView const& v, std::string const& key)
{
    std::string k = v.str(key);
    if (k == "uncentered_maximal")
        return OperatorKind::uncentered_maximal;
    if (k == "centered_maximal")
        return OperatorKind::centered_maximal;
    if (k == "fractional_integral")
        return OperatorKind::fractional_integral;
    v.error(key, "unknown operator '" + k + "'");
}

BumpDraw BumpDraw::parse(JsonView const& v, BumpDraw d)
{
    d.count = v.integer("count", d.count);
    auto rx = v.nums("radius_x", {d.rx_min, d.rx_max});
    auto rt = v.nums("radius_t", {d.rt_min, d.rt_max});
    if (rx.size() != 2 || !(0.0 < rx[0] && rx[0] <= rx[1]))
        v.error("radius_x", "expected [min, max] with 0 < min <= max");
    if (rt.size() != 2 || !(0.0 < rt[0] && rt[0] <= rt[1]))
        v.error("radius_t", "expected [min, max] with 0 < min <= max");
    d.rx_min = rx[0];
    d.rx_max = rx[1];
    d.rt_min = rt[0];
    d.rt_max = rt[1];
    d.margin_cells = v.integer("margin_cells", d.margin_cells);
    d.stream = v.str("stream", d.stream);
    if (d.count < 1)
        v.error("count", "must be at least 1");
    if (d.margin_cells < 0)
        v.error("margin_cells", "must be non-negative");
    return d;
}

std::vector<Bump> BumpDraw::draw(GridSpec const& g, std::uint64_t seed, std::uint64_t index) const
{
    CounterRng rng = CounterRng(seed, stream).substream(index);
    return random_bumps(rng, inner_box(g, margin_cells), count, rx_min, rx_max, rt_min, rt_max);
}

GridSpec const& ExperimentConfig::require_grid(std::string const& path) const
{
    if (!grid)
        fail(ErrorKind::config, path + ": needs a grid");
    return *grid;
}

std::uint64_t ExperimentConfig::require_seed(std::string const& path) const
{
    if (!seed)
        fail(ErrorKind::config, path + ": randomized item needs a seed");
    return *seed;
}

WeightSpec const& ExperimentConfig::weight(JsonView const& task, std::string const& key) const
{
    std::string name = task.str(key);
    auto it = weights.find(name);
    if (it == weights.end())
        task.error(key, "unknown weight '" + name + "'");
    return it->second;
}

FieldEntry const& ExperimentConfig::field(JsonView const& task, std::string const& key) const
{
    std::string name = task.str(key);
    auto it = fields.find(name);
    if (it == fields.end())
        task.error(key, "unknown field '" + name + "'");
    return it->second;
}

namespace
{

FieldEntry parse_field(JsonView const& v, ExperimentConfig const& cfg)
{
    GridSpec const& g = cfg.require_grid(v.path());
    int n = cfg.params.n;
    std::string kind = v.str("kind");
    FieldEntry e;
    if (kind == "bumps")
    {
        JsonView list = v.at("bumps");
        if (!list.is_array())
            list.error("", "expected an array of bumps");
        std::vector<Bump> bumps;
        for (std::size_t i = 0; i < list.size(); ++i)
            bumps.push_back(parse_bump(list.at(i), n));
        e.field = sample(g, bumps);
        e.bumps = std::move(bumps);
    }
    else if (kind == "random_bumps")
    {
        BumpDraw d = BumpDraw::parse(v, BumpDraw{});
        auto bumps = d.draw(g, cfg.require_seed(v.path()),
                            static_cast<std::uint64_t>(v.integer("index", 0)));
        e.field = sample(g, bumps);
        e.bumps = std::move(bumps);
    }
    else if (kind == "indicator")
        e.field = indicator(g, parse_box(v.at("box"), n));
    else if (kind == "noise")
    {
        CounterRng rng(cfg.require_seed(v.path()), v.str("stream", "noise"));
        Box support = v.has("support") ? parse_box(v.at("support"), n) : g.window();
        e.field = random_noise(g, rng, support, v.num("amplitude", 1.0), v.flag("integer", false));
        double offset = v.num("offset", 0.0);
        for (auto& x : e.field.values)
            x += offset;
    }
    else if (kind == "file")
    {
        std::string path = v.str("path");
        e.field = wrap(v, [&] {
            return path.size() > 4 && path.substr(path.size() - 4) == ".csv" ? load_field_csv(path)
                                                                              : load_field(path);
        });
        if (!(e.field.spec == g))
            v.error("path", "field grid differs from the config grid");
    }
    else
        v.error("kind", "unknown field kind '" + kind + "'");
    return e;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(json const& doc)
{
    JsonView root(doc, "");
    if (!doc.is_object())
        root.error("", "config must be a JSON object");
    ExperimentConfig cfg;
    if (root.has("params"))
    {
        JsonView pv = root.at("params");
        cfg.params.n = pv.integer("n", 1);
        cfg.params.p = pv.num("p", 2.0);
        wrap(pv, [&] {
            cfg.params.validate();
            return 0;
        });
    }
    if (root.has("seed"))
        cfg.seed = root.seed("seed");
    if (root.has("grid"))
        cfg.grid = parse_grid(root.at("grid"), cfg.params);
    if (root.has("fields"))
    {
        JsonView fv = root.at("fields");
        if (!fv.is_object())
            fv.error("", "expected an object of named fields");
        for (auto const& [name, _] : fv.raw().items())
            cfg.fields[name] = parse_field(fv.at(name), cfg);
    }
    cfg.weights["one"] = WeightSpec::constant(1.0);
    if (root.has("weights"))
    {
        JsonView wv = root.at("weights");
        if (!wv.is_object())
            wv.error("", "expected an object of named weights");
        for (auto const& [name, _] : wv.raw().items())
        {
            JsonView w = wv.at(name);
            if (w.str("kind") == "field")
            {
                FieldEntry const& e = cfg.field(w, "field");
                cfg.weights[name] = WeightSpec::grid(e.field);
            }
            else
                cfg.weights[name] = parse_weight(w);
        }
    }
    if (root.has("tasks"))
    {
        JsonView tv = root.at("tasks");
        if (!tv.is_array())
            tv.error("", "expected an array of tasks");
        for (std::size_t i = 0; i < tv.size(); ++i)
        {
            JsonView t = tv.at(i);
            if (!t.is_object())
                t.error("", "expected an object");
            std::string type = t.str("type");
            if (type != "constant_estimate" && type != "operator_eval" && type != "construction" &&
                type != "check")
                t.error("type", "unknown task type '" + type + "'");
        }
        cfg.tasks = doc["tasks"];
    }
    cfg.output = root.str("output", "");
    return cfg;
}

ExperimentConfig ExperimentConfig::load(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::io, "cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try
    {
        doc = json::parse(ss.str(), nullptr, true, true);
    }
    catch (json::parse_error const& e)
    {
        fail(ErrorKind::config, path + ": " + e.what());
    }
    return parse(doc);
}

}  // namespace parawt
