#ifndef OBSV_OBSV_H
#define OBSV_OBSV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OBSV_API __declspec(dllexport)
#else
#define OBSV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum obsv_status {
    OBSV_OK = 0,
    OBSV_ERR_INPUT = 1,    /* unreadable file, parse error, bad argument */
    OBSV_ERR_ANALYSIS = 2, /* analysis or evaluation failure */
    OBSV_REFUTED = 3       /* a declared conserved quantity is not conserved */
} obsv_status;

typedef struct obsv_model obsv_model;

typedef struct obsv_options {
    uint64_t seed;
    int k; /* embedding order, -1 for n - 1 */
    int trials;
    /* numeric cross-check; NULL / 0 pick seeded defaults */
    const double* x0;
    size_t x0_len;
    const char* params; /* "name=value,..." */
    double dt;
    double T;
} obsv_options;

OBSV_API obsv_options obsv_options_default(void);

/* Message for the last failed call on this thread; never NULL. */
OBSV_API const char* obsv_last_error(void);

OBSV_API const char* obsv_version(void);

OBSV_API obsv_status obsv_model_load(const char* path, obsv_model** out);
OBSV_API obsv_status obsv_model_parse(const char* text, obsv_model** out);
OBSV_API void obsv_model_free(obsv_model* model);

OBSV_API size_t obsv_model_state_count(const obsv_model* model);
/* Borrowed; valid while the model lives and is not reduced. */
OBSV_API const char* obsv_model_name(const obsv_model* model);
OBSV_API const char* obsv_model_state_name(const obsv_model* model, size_t i);

/* Eliminates var through the conserved quantity named level, in place.
   level may also be given as "LEVEL:var" with var == NULL. */
OBSV_API obsv_status obsv_model_reduce(obsv_model* model, const char* level, const char* var);

/* Outputs are heap strings released with obsv_string_free. */
OBSV_API obsv_status obsv_analyze(const obsv_model* model, const obsv_options* options, char** json_out);
OBSV_API obsv_status obsv_verify(const obsv_model* model, uint64_t seed, char** json_out);
OBSV_API obsv_status obsv_graph_dot(const obsv_model* model, char** dot_out);
OBSV_API obsv_status obsv_simulate(const obsv_model* model, const double* x0, size_t x0_len, const char* params,
                                   double dt, double T, char** csv_out, char** json_out);

/* Text summary of any report produced above. */
OBSV_API obsv_status obsv_summary(const char* report_json, char** text_out);

OBSV_API void obsv_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
