#ifndef PARTITION_LAB_H
#define PARTITION_LAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(PLAB_BUILDING_LIBRARY)
#define PLAB_API __attribute__((visibility("default")))
#else
#define PLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returning plab_status leaves a message for
   plab_last_error() on failure (per thread). */
typedef enum plab_status {
  PLAB_OK = 0,
  PLAB_INVALID_ARGUMENT = 1,
  PLAB_DEGENERATE_DOMAIN = 2,
  PLAB_INVALID_SHAPE = 3,
  PLAB_NO_CONVERGENCE = 4,
  PLAB_INVALID_EIGENFUNCTION = 5,
  PLAB_NOT_APPLICABLE = 6,
  PLAB_NOT_STRONG = 7,
  PLAB_DEGENERATE_TILING = 8,
  PLAB_TOO_MANY_PARTS = 9,
  PLAB_RESEED_REQUIRED = 10,
  PLAB_UNKNOWN_BOUND = 11,
  PLAB_INVALID_CONFIG = 12,
  PLAB_IO = 13,
  PLAB_HARD_ASSERTION = 14,
  PLAB_INTERNAL = 99
} plab_status;

typedef struct plab_domain plab_domain;
typedef struct plab_partition plab_partition;

PLAB_API const char* plab_status_string(plab_status s);
PLAB_API const char* plab_last_error(void);
PLAB_API const char* plab_version(void);

/* Worker thread cap; 0 restores the default. */
PLAB_API void plab_set_threads(int n);

/* Strings returned through char** are owned by the caller. */
PLAB_API void plab_string_free(char* s);

/* Domains. `shape_json` uses the config "domain" format. */
PLAB_API plab_status plab_domain_create(const char* shape_json, double resolution, plab_domain** out);
PLAB_API void plab_domain_destroy(plab_domain* d);
PLAB_API plab_status plab_domain_cell_count(const plab_domain* d, size_t* inside);
PLAB_API plab_status plab_domain_measure(const plab_domain* d, double* area, double* boundary_length,
                                         double* inner_radius, int* euler_char);
/* Lowest m Dirichlet eigenvalues into values[0..m). */
PLAB_API plab_status plab_eigenvalues(const plab_domain* d, int m, double tol, double* values);

/* Partitions. */
PLAB_API plab_status plab_partition_nodal_product(const plab_domain* d, int p, int q, plab_partition** out);
PLAB_API plab_status plab_partition_hexagonal(const plab_domain* d, double cell_area, plab_partition** out);
/* `k`-partition search; `options_json` may be NULL or an optimize params object. */
PLAB_API plab_status plab_partition_optimize(const plab_domain* d, int k, uint64_t seed, const char* options_json,
                                             double* lower, double* upper, plab_partition** out);
PLAB_API void plab_partition_destroy(plab_partition* p);
PLAB_API int plab_partition_k(const plab_partition* p);

/* Report and bound audit as JSON text. */
PLAB_API plab_status plab_partition_report_json(const plab_partition* p, double tol_eq, int with_energy, char** json);
PLAB_API plab_status plab_partition_audit_json(const plab_partition* p, double tol_eq, char** json);
PLAB_API plab_status plab_partition_svg(const plab_partition* p, char** svg);

/* Bound ids. */
PLAB_API int plab_bound_count(void);
PLAB_API const char* plab_bound_name(int i);

/* Run a config file. out_dir may be NULL; seed < 0 keeps the config seed;
   threads <= 0 falls back to PARTITION_LAB_THREADS. *exit_code gets 0, 1 or 2;
   *message (may be NULL) receives diagnostics. Summary lines go to stdout. */
PLAB_API plab_status plab_run(const char* config_path, const char* out_dir, long long seed, int threads,
                              int* exit_code, char** message);

#ifdef __cplusplus
}
#endif

#endif
