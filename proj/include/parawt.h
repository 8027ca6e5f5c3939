/* C interface to the parabolic weighted-inequality toolkit.
 *
 * All objects are opaque handles created and released through this API.
 * Functions return PARAWT_OK or an error code; the message of the most
 * recent failure on the calling thread is available from
 * parawt_last_error(). Strings returned by accessors stay valid until the
 * owning handle is freed. */
#ifndef PARAWT_H
#define PARAWT_H

#include <stddef.h>
#include <stdint.h>

#if defined(PARAWT_BUILDING)
#define PARAWT_API __attribute__((visibility("default")))
#else
#define PARAWT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum parawt_status {
    PARAWT_OK = 0,
    PARAWT_E_PARAMETER = 1,
    PARAWT_E_DOMAIN = 2,
    PARAWT_E_DEGENERATE = 3,
    PARAWT_E_SHAPE = 4,
    PARAWT_E_VALIDATION = 5,
    PARAWT_E_STRUCTURAL = 6,
    PARAWT_E_IO = 7,
    PARAWT_E_CONFIG = 8,
    PARAWT_E_NULL = 9,
    PARAWT_E_RANGE = 10,
    PARAWT_E_INTERNAL = 99
} parawt_status;

typedef struct parawt_config parawt_config;
typedef struct parawt_run parawt_run;
typedef struct parawt_field parawt_field;

PARAWT_API const char* parawt_version(void);
PARAWT_API const char* parawt_last_error(void);
PARAWT_API const char* parawt_status_name(int status);

/* Configs: a JSON document or a file holding one. */
PARAWT_API int parawt_config_parse(const char* json_text, parawt_config** out);
PARAWT_API int parawt_config_load(const char* path, parawt_config** out);
PARAWT_API size_t parawt_config_task_count(const parawt_config* cfg);
PARAWT_API void parawt_config_free(parawt_config* cfg);

/* Runs every task. out_dir may be NULL to use the config's output
 * directory; write = 0 skips writing the bundle. */
PARAWT_API int parawt_run_config(const parawt_config* cfg, const char* out_dir, int jobs,
                                 int write, parawt_run** out);
PARAWT_API int parawt_run_all_passed(const parawt_run* run);
PARAWT_API size_t parawt_run_task_count(const parawt_run* run);
PARAWT_API const char* parawt_run_summary_csv(const parawt_run* run);
PARAWT_API const char* parawt_run_output_dir(const parawt_run* run);
/* Per-task accessors; index < parawt_run_task_count. */
PARAWT_API int parawt_run_task_json(const parawt_run* run, size_t index, const char** json);
PARAWT_API int parawt_run_task_result(const parawt_run* run, size_t index, double* value,
                                      int* ok, int* pass, double* runtime_s);
PARAWT_API void parawt_run_free(parawt_run* run);

/* Check registry. */
PARAWT_API size_t parawt_check_count(void);
PARAWT_API const char* parawt_check_name(size_t index);
PARAWT_API const char* parawt_check_statement(size_t index);

/* Sampled fields in the binary or CSV serialization. */
PARAWT_API int parawt_field_load(const char* path, parawt_field** out);
PARAWT_API int parawt_field_save(const parawt_field* f, const char* path);
/* n spatial axes; shape has n+1 entries (space then time). */
PARAWT_API int parawt_field_shape(const parawt_field* f, int* n, int shape[3]);
PARAWT_API int parawt_field_spacing(const parawt_field* f, double* h_x, double* h_t);
PARAWT_API size_t parawt_field_size(const parawt_field* f);
PARAWT_API const double* parawt_field_values(const parawt_field* f);
PARAWT_API void parawt_field_free(parawt_field* f);

/* Geometry helpers: R = Q(x,L) × (t − L^p, t + L^p) with n = 1. The upper
 * part is written as {x_lo, t_lo, x_hi, t_hi}. */
PARAWT_API int parawt_upper_part(double x, double t, double L, double p, double gamma,
                                 double box[4]);
PARAWT_API int parawt_lower_part(double x, double t, double L, double p, double gamma,
                                 double box[4]);

#ifdef __cplusplus
}
#endif

#endif
