#ifndef KNOTOPO_H
#define KNOTOPO_H

/* C interface to the Kerr-oscillator topology simulator. All objects are
 * opaque handles owned by the caller and released with the matching _free.
 * Every fallible call returns a kno_status; on failure kno_last_error()
 * describes the problem for the calling thread. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(KNOTOPO_BUILDING)
#    define KNO_API __declspec(dllexport)
#  else
#    define KNO_API __declspec(dllimport)
#  endif
#else
#  define KNO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kno_status {
  KNO_OK = 0,
  KNO_ERR_INVALID_DIMENSION = 1,
  KNO_ERR_TRUNCATION_TOO_SMALL = 2,
  KNO_ERR_NUMERICAL = 3,
  KNO_ERR_DIMENSION_MISMATCH = 4,
  KNO_ERR_ILL_CONDITIONED_BASIS = 5,
  KNO_ERR_OUT_OF_RANGE = 6,
  KNO_ERR_SINGULAR_CD = 7,
  KNO_ERR_DEGENERATE_HAMILTONIAN = 8,
  KNO_ERR_INSUFFICIENT_SAMPLING = 9,
  KNO_ERR_DEGENERATE_READOUT = 10,
  KNO_ERR_ON_MANIFOLD_DEGENERACY = 11,
  KNO_ERR_INVALID_ARGUMENT = 12,
  KNO_ERR_CONFIG = 13,
  KNO_ERR_IO = 14,
  KNO_ERR_USAGE = 15,
  KNO_ERR_INTERNAL = 99
} kno_status;

typedef struct kno_config kno_config;
typedef struct kno_report kno_report;
typedef struct kno_result kno_result;
typedef struct kno_trajectory kno_trajectory;

typedef struct kno_sample {
  double t;     /* us */
  double theta; /* rad */
  double sx;
  double sy;
  double sz;
  double pop;
  double norm;
} kno_sample;

KNO_API const char* kno_version(void);
KNO_API const char* kno_status_name(kno_status s);
/* Message of the last failed call on this thread; "" if none. */
KNO_API const char* kno_last_error(void);

/* Configuration: a preset name ("fig1", "fig2-4") or a JSON file path. */
KNO_API kno_status kno_config_load(const char* preset_or_path, kno_config** out);
KNO_API kno_status kno_config_parse(const char* json_text, kno_config** out);
KNO_API void kno_config_free(kno_config* c);
KNO_API kno_status kno_config_preset_name(const kno_config* c, const char** out);

/* "linear_response", "sta", "sweep" or "wigner_movie". */
KNO_API kno_status kno_config_set_protocol(kno_config* c, const char* protocol);
/* Sets delta_0 = chi * delta_z. */
KNO_API kno_status kno_config_set_chi(kno_config* c, double chi);
/* "ket0" or "ket1". */
KNO_API kno_status kno_config_set_initial(kno_config* c, const char* initial);
KNO_API kno_status kno_config_set_sta(kno_config* c, int on);
KNO_API kno_status kno_config_set_steps(kno_config* c, int n_steps);
KNO_API kno_status kno_config_set_dim(kno_config* c, int dim);
KNO_API kno_status kno_config_set_output_dir(kno_config* c, const char* dir);
/* "csv" or "json". */
KNO_API kno_status kno_config_set_format(kno_config* c, const char* format);
KNO_API kno_status kno_config_set_jobs(kno_config* c, int jobs);
KNO_API kno_status kno_config_set_sweep_chi(kno_config* c, const double* chi, size_t n);
/* "linear_response" or "sta". */
KNO_API kno_status kno_config_set_sweep_protocol(kno_config* c, const char* protocol);
/* Resolved configuration as JSON; release with kno_string_free. */
KNO_API kno_status kno_config_to_json(const kno_config* c, char** out);
KNO_API void kno_string_free(char* s);

/* Validation never fails on bad physics; the report says what is wrong. */
KNO_API kno_status kno_validate(const kno_config* c, kno_report** out);
KNO_API int kno_report_ok(const kno_report* r);
KNO_API const char* kno_report_text(const kno_report* r);
KNO_API double kno_report_stabilizer_ratio(const kno_report* r);
KNO_API double kno_report_truncation_leakage(const kno_report* r);
KNO_API void kno_report_free(kno_report* r);

/* Runs the configured protocol and writes its output files. */
KNO_API kno_status kno_run(const kno_config* c, kno_result** out);
KNO_API const char* kno_result_output_dir(const kno_result* r);
KNO_API size_t kno_result_file_count(const kno_result* r);
KNO_API const char* kno_result_file(const kno_result* r, size_t i);
/* Returns 1 and stores C1 when the run produced a single Chern number. */
KNO_API int kno_result_c1(const kno_result* r, double* c1);
KNO_API size_t kno_result_warning_count(const kno_result* r);
KNO_API const char* kno_result_warning(const kno_result* r, size_t i);
KNO_API void kno_result_free(kno_result* r);

/* Single converged simulation with the config's model and run settings;
 * writes no files. */
KNO_API kno_status kno_simulate(const kno_config* c, kno_trajectory** out);
KNO_API size_t kno_trajectory_size(const kno_trajectory* t);
KNO_API kno_status kno_trajectory_sample(const kno_trajectory* t, size_t i, kno_sample* out);
KNO_API int kno_trajectory_converged(const kno_trajectory* t);
KNO_API int kno_trajectory_steps(const kno_trajectory* t);
/* Linear-response C1 (Berry curvature integral) and STA C1q of a trajectory. */
KNO_API kno_status kno_trajectory_chern_linear_response(const kno_trajectory* t, double* c1);
KNO_API kno_status kno_trajectory_chern_sta(const kno_trajectory* t, double* c1);
KNO_API void kno_trajectory_free(kno_trajectory* t);

/* Chern number of the two-level monopole enclosed by the parameter manifold. */
KNO_API kno_status kno_monopole_chern(double chi, double aspect, double* c1);

#ifdef __cplusplus
}
#endif

#endif
