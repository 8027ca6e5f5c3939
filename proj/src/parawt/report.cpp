#include "parawt/report.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "parawt/error.hpp"
#include "parawt/random.hpp"

namespace parawt
{

using nlohmann::json;

std::string params_hash(json const& params)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(params.dump())));
    return buf;
}

json finite_json(json const& j)
{
    if (j.is_number_float())
    {
        double v = j.get<double>();
        if (std::isfinite(v))
            return j;
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    if (j.is_array())
    {
        json out = json::array();
        for (auto const& e : j)
            out.push_back(finite_json(e));
        return out;
    }
    if (j.is_object())
    {
        json out = json::object();
        for (auto const& [k, e] : j.items())
            out[k] = finite_json(e);
        return out;
    }
    return j;
}

std::string format_value(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json report_json(CheckReport const& r)
{
    json j = {{"name", r.name},
              {"params", r.params},
              {"margin", r.margin},
              {"tolerance", r.tolerance},
              {"applicable", r.applicable},
              {"pass", r.pass},
              {"details", r.details}};
    if (r.witness)
    {
        json x = json::array();
        for (int a = 0; a < r.witness->n; ++a)
            x.push_back(r.witness->x[static_cast<std::size_t>(a)]);
        j["witness"] = {{"x", x}, {"t", r.witness->t}};
    }
    else
        j["witness"] = nullptr;
    return finite_json(j);
}

json task_json(TaskResult const& t)
{
    json j = {{"index", t.index},
              {"name", t.name},
              {"type", t.type},
              {"params", t.params},
              {"params_hash", params_hash(t.params)},
              {"ok", t.ok},
              {"pass", t.pass},
              {"value", t.value}};
    if (!t.ok)
        j["error"] = t.error;
    j["result"] = t.record;
    json files = json::array();
    for (auto const& [stem, _] : t.fields)
        files.push_back(stem + ".field");
    j["fields"] = files;
    return finite_json(j);
}

std::string summary_csv(std::vector<TaskResult> const& tasks)
{
    std::string out = "name,params_hash,value,pass\n";
    for (auto const& t : tasks)
    {
        out += t.name;
        out += ',';
        out += params_hash(t.params);
        out += ',';
        out += t.ok ? format_value(t.value) : "error";
        out += ',';
        out += t.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

std::string task_stem(TaskResult const& t)
{
    char idx[16];
    std::snprintf(idx, sizeof idx, "%03zu_", t.index);
    std::string s = idx;
    for (char c : t.name)
        s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return s;
}

void write_text(std::string const& path, std::string const& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorKind::io, "cannot write " + path);
    out << text;
    if (!out)
        fail(ErrorKind::io, "write failed for " + path);
}

}  // namespace parawt
