// Command-line front end: `run <config> [--out DIR] [--jobs N]` and
// `list-checks`.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "parawt.h"

namespace
{

int list_checks()
{
    std::size_t n = parawt_check_count();
    for (std::size_t i = 0; i < n; ++i)
        std::printf("%-28s %s\n", parawt_check_name(i), parawt_check_statement(i));
    return 0;
}

int run(std::string const& config, std::string const& out, int jobs, bool quiet)
{
    parawt_config* cfg = nullptr;
    int st = parawt_config_load(config.c_str(), &cfg);
    if (st != PARAWT_OK)
    {
        std::fprintf(stderr, "error (%s): %s\n", parawt_status_name(st), parawt_last_error());
        return 2;
    }
    parawt_run* r = nullptr;
    st = parawt_run_config(cfg, out.empty() ? nullptr : out.c_str(), jobs, 1, &r);
    parawt_config_free(cfg);
    if (st != PARAWT_OK)
    {
        std::fprintf(stderr, "error (%s): %s\n", parawt_status_name(st), parawt_last_error());
        return 2;
    }
    if (!quiet)
    {
        std::fputs(parawt_run_summary_csv(r), stdout);
        for (std::size_t i = 0; i < parawt_run_task_count(r); ++i)
        {
            double value = 0.0, secs = 0.0;
            int ok = 0, pass = 0;
            parawt_run_task_result(r, i, &value, &ok, &pass, &secs);
            std::fprintf(stderr, "task %zu: %s in %.3fs\n", i,
                         !ok ? "error" : (pass ? "pass" : "fail"), secs);
        }
        std::fprintf(stderr, "wrote %s\n", parawt_run_output_dir(r));
    }
    int code = parawt_run_all_passed(r) ? 0 : 1;
    parawt_run_free(r);
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Parabolic weighted-inequality experiments"};
    app.require_subcommand(1);

    std::string config, out;
    int jobs = 1;
    bool quiet = false;
    auto* run_cmd = app.add_subcommand("run", "Run the tasks of a config and write the report bundle");
    run_cmd->add_option("config", config, "Config file (JSON)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out, "Output directory (overrides the config)");
    run_cmd->add_option("--jobs", jobs, "Tasks run in parallel")->check(CLI::Range(1, 64));
    run_cmd->add_flag("-q,--quiet", quiet, "Print nothing on success");

    auto* list_cmd = app.add_subcommand("list-checks", "List the available checks");

    CLI11_PARSE(app, argc, argv);
    if (*list_cmd)
        return list_checks();
    return run(config, out, jobs, quiet);
}
