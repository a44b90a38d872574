/* C interface to the rpf cocycle library. All handles are opaque; every
 * function that can fail returns an rpf_status and leaves a message for
 * rpf_last_error() on the calling thread. */
#ifndef RPF_RPF_H
#define RPF_RPF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RPF_API __declspec(dllexport)
#else
#define RPF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rpf_status {
  RPF_OK = 0,
  RPF_INVALID_CONFIG = 1,
  RPF_VERIFICATION_FAILED = 2,
  RPF_STRUCTURAL = 3,
  RPF_IO_ERROR = 4,
  RPF_INVALID_ARGUMENT = 5,
  RPF_INTERNAL = 6
} rpf_status;

typedef struct rpf_config rpf_config;
typedef struct rpf_report rpf_report;

RPF_API const char* rpf_version(void);
/* Message of the last failure on this thread, "" if none. */
RPF_API const char* rpf_last_error(void);

RPF_API rpf_status rpf_config_parse(const char* text, size_t len, rpf_config** out);
RPF_API rpf_status rpf_config_load(const char* path, rpf_config** out);
RPF_API void rpf_config_free(rpf_config* cfg);
RPF_API rpf_status rpf_config_set_seed(rpf_config* cfg, uint64_t seed);
RPF_API rpf_status rpf_config_set_steps(rpf_config* cfg, uint64_t steps);

/* Runs a command (validate, class-degree, lyapunov, pressure, cones,
 * decompose, verify). A report is produced whenever the command ran,
 * including structural failures and failed verification; the return value
 * is the matching status. */
RPF_API rpf_status rpf_run(const rpf_config* cfg, const char* command, rpf_report** out);

/* Pointers stay valid until rpf_report_free. */
RPF_API const char* rpf_report_json(const rpf_report* report);
RPF_API const char* rpf_report_trace_csv(const rpf_report* report);
RPF_API int rpf_report_passed(const rpf_report* report);
RPF_API int rpf_report_exit_code(const rpf_report* report);
RPF_API rpf_status rpf_report_write(const rpf_report* report, const char* json_path, const char* trace_path);
RPF_API void rpf_report_free(rpf_report* report);

#ifdef __cplusplus
}
#endif

#endif
