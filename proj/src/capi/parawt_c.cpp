#include "parawt.h"

#include <memory>
#include <new>
#include <string>

#include "parawt/checks.hpp"
#include "parawt/error.hpp"
#include "parawt/runner.hpp"

struct parawt_config
{
    parawt::ExperimentConfig cfg;
};

struct parawt_run
{
    parawt::RunResult result;
    std::string summary;
    std::vector<std::string> task_json;
};

struct parawt_field
{
    parawt::SampledField f;
};

namespace
{

thread_local std::string last_error;

int status_of(parawt::ErrorKind k)
{
    using parawt::ErrorKind;
    switch (k)
    {
    case ErrorKind::parameter:
        return PARAWT_E_PARAMETER;
    case ErrorKind::domain:
        return PARAWT_E_DOMAIN;
    case ErrorKind::degenerate:
        return PARAWT_E_DEGENERATE;
    case ErrorKind::shape:
        return PARAWT_E_SHAPE;
    case ErrorKind::validation:
        return PARAWT_E_VALIDATION;
    case ErrorKind::structural:
        return PARAWT_E_STRUCTURAL;
    case ErrorKind::io:
        return PARAWT_E_IO;
    case ErrorKind::config:
        return PARAWT_E_CONFIG;
    }
    return PARAWT_E_INTERNAL;
}

int set_error(int status, std::string msg)
{
    last_error = std::move(msg);
    return status;
}

template <class F>
int guarded(F&& fn)
{
    try
    {
        fn();
        last_error.clear();
        return PARAWT_OK;
    }
    catch (parawt::Error const& e)
    {
        return set_error(status_of(e.kind()), e.what());
    }
    catch (std::bad_alloc const&)
    {
        return set_error(PARAWT_E_INTERNAL, "out of memory");
    }
    catch (std::exception const& e)
    {
        return set_error(PARAWT_E_INTERNAL, e.what());
    }
    catch (...)
    {
        return set_error(PARAWT_E_INTERNAL, "unknown error");
    }
}

#define PARAWT_REQUIRE_PTR(p)                                                  \
    do                                                                         \
    {                                                                          \
        if (!(p))                                                              \
            return set_error(PARAWT_E_NULL, "null argument: " #p);            \
    } while (0)

int part_box(double x, double t, double L, double p, double gamma, double box[4], bool upper)
{
    PARAWT_REQUIRE_PTR(box);
    return guarded([&] {
        parawt::require(L > 0.0, parawt::ErrorKind::parameter, "half-edge must be positive");
        parawt::require(p > 1.0, parawt::ErrorKind::parameter, "p must exceed 1");
        auto R = parawt::make_rectangle(parawt::Point::make(1, {x, 0.0}, t), L, p);
        parawt::Box b = upper ? parawt::upper_part(R, gamma) : parawt::lower_part(R, gamma);
        box[0] = b.lo[0];
        box[1] = b.lo[1];
        box[2] = b.hi[0];
        box[3] = b.hi[1];
    });
}

}  // namespace

extern "C" {

const char* parawt_version(void)
{
    return "1.0.0";
}

const char* parawt_last_error(void)
{
    return last_error.c_str();
}

const char* parawt_status_name(int status)
{
    switch (status)
    {
    case PARAWT_OK:
        return "ok";
    case PARAWT_E_PARAMETER:
        return "parameter";
    case PARAWT_E_DOMAIN:
        return "domain";
    case PARAWT_E_DEGENERATE:
        return "degenerate";
    case PARAWT_E_SHAPE:
        return "shape";
    case PARAWT_E_VALIDATION:
        return "validation";
    case PARAWT_E_STRUCTURAL:
        return "structural";
    case PARAWT_E_IO:
        return "io";
    case PARAWT_E_CONFIG:
        return "config";
    case PARAWT_E_NULL:
        return "null";
    case PARAWT_E_RANGE:
        return "range";
    default:
        return "internal";
    }
}

int parawt_config_parse(const char* json_text, parawt_config** out)
{
    PARAWT_REQUIRE_PTR(json_text);
    PARAWT_REQUIRE_PTR(out);
    *out = nullptr;
    return guarded([&] {
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(json_text, nullptr, true, true);
        }
        catch (nlohmann::json::parse_error const& e)
        {
            parawt::fail(parawt::ErrorKind::config, e.what());
        }
        auto h = std::make_unique<parawt_config>();
        h->cfg = parawt::ExperimentConfig::parse(doc);
        *out = h.release();
    });
}

int parawt_config_load(const char* path, parawt_config** out)
{
    PARAWT_REQUIRE_PTR(path);
    PARAWT_REQUIRE_PTR(out);
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<parawt_config>();
        h->cfg = parawt::ExperimentConfig::load(path);
        *out = h.release();
    });
}

size_t parawt_config_task_count(const parawt_config* cfg)
{
    return cfg ? cfg->cfg.tasks.size() : 0;
}

void parawt_config_free(parawt_config* cfg)
{
    delete cfg;
}

int parawt_run_config(const parawt_config* cfg, const char* out_dir, int jobs, int write,
                      parawt_run** out)
{
    PARAWT_REQUIRE_PTR(cfg);
    PARAWT_REQUIRE_PTR(out);
    *out = nullptr;
    return guarded([&] {
        parawt::RunOptions opt;
        opt.out_dir = out_dir ? out_dir : "";
        opt.jobs = jobs;
        opt.write = write != 0;
        auto h = std::make_unique<parawt_run>();
        h->result = parawt::run_experiment(cfg->cfg, opt);
        h->summary = parawt::summary_csv(h->result.tasks);
        for (auto const& t : h->result.tasks)
            h->task_json.push_back(parawt::task_json(t).dump(2));
        *out = h.release();
    });
}

int parawt_run_all_passed(const parawt_run* run)
{
    return run && run->result.all_passed ? 1 : 0;
}

size_t parawt_run_task_count(const parawt_run* run)
{
    return run ? run->result.tasks.size() : 0;
}

const char* parawt_run_summary_csv(const parawt_run* run)
{
    return run ? run->summary.c_str() : "";
}

const char* parawt_run_output_dir(const parawt_run* run)
{
    return run ? run->result.out_dir.c_str() : "";
}

int parawt_run_task_json(const parawt_run* run, size_t index, const char** json)
{
    PARAWT_REQUIRE_PTR(run);
    PARAWT_REQUIRE_PTR(json);
    if (index >= run->task_json.size())
        return set_error(PARAWT_E_RANGE, "task index out of range");
    *json = run->task_json[index].c_str();
    return PARAWT_OK;
}

int parawt_run_task_result(const parawt_run* run, size_t index, double* value, int* ok,
                           int* pass, double* runtime_s)
{
    PARAWT_REQUIRE_PTR(run);
    if (index >= run->result.tasks.size())
        return set_error(PARAWT_E_RANGE, "task index out of range");
    auto const& t = run->result.tasks[index];
    if (value)
        *value = t.value;
    if (ok)
        *ok = t.ok ? 1 : 0;
    if (pass)
        *pass = t.pass ? 1 : 0;
    if (runtime_s)
        *runtime_s = t.runtime_s;
    return PARAWT_OK;
}

void parawt_run_free(parawt_run* run)
{
    delete run;
}

size_t parawt_check_count(void)
{
    return parawt::check_registry().size();
}

const char* parawt_check_name(size_t index)
{
    auto reg = parawt::check_registry();
    return index < reg.size() ? reg[index].name.c_str() : nullptr;
}

const char* parawt_check_statement(size_t index)
{
    auto reg = parawt::check_registry();
    return index < reg.size() ? reg[index].statement.c_str() : nullptr;
}

int parawt_field_load(const char* path, parawt_field** out)
{
    PARAWT_REQUIRE_PTR(path);
    PARAWT_REQUIRE_PTR(out);
    *out = nullptr;
    return guarded([&] {
        std::string p = path;
        auto h = std::make_unique<parawt_field>();
        bool csv = p.size() > 4 && p.compare(p.size() - 4, 4, ".csv") == 0;
        h->f = csv ? parawt::load_field_csv(p) : parawt::load_field(p);
        *out = h.release();
    });
}

int parawt_field_save(const parawt_field* f, const char* path)
{
    PARAWT_REQUIRE_PTR(f);
    PARAWT_REQUIRE_PTR(path);
    return guarded([&] {
        std::string p = path;
        bool csv = p.size() > 4 && p.compare(p.size() - 4, 4, ".csv") == 0;
        if (csv)
            parawt::save_field_csv(f->f, p);
        else
            parawt::save_field(f->f, p);
    });
}

int parawt_field_shape(const parawt_field* f, int* n, int shape[3])
{
    PARAWT_REQUIRE_PTR(f);
    PARAWT_REQUIRE_PTR(n);
    PARAWT_REQUIRE_PTR(shape);
    *n = f->f.spec.n;
    for (int a = 0; a < 3; ++a)
        shape[a] = a <= f->f.spec.n ? f->f.spec.shape[static_cast<std::size_t>(a)] : 1;
    return PARAWT_OK;
}

int parawt_field_spacing(const parawt_field* f, double* h_x, double* h_t)
{
    PARAWT_REQUIRE_PTR(f);
    if (h_x)
        *h_x = f->f.spec.h_x;
    if (h_t)
        *h_t = f->f.spec.h_t;
    return PARAWT_OK;
}

size_t parawt_field_size(const parawt_field* f)
{
    return f ? f->f.size() : 0;
}

const double* parawt_field_values(const parawt_field* f)
{
    return f ? f->f.values.data() : nullptr;
}

void parawt_field_free(parawt_field* f)
{
    delete f;
}

int parawt_upper_part(double x, double t, double L, double p, double gamma, double box[4])
{
    return part_box(x, t, L, p, gamma, box, true);
}

int parawt_lower_part(double x, double t, double L, double p, double gamma, double box[4])
{
    return part_box(x, t, L, p, gamma, box, false);
}

}  // extern "C"
