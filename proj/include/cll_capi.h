#ifndef CLL_CAPI_H
#define CLL_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes: 0 is success; other values name the error kinds listed by cll_error_name. */
#define CLL_OK 0

typedef struct cll_context cll_context;
typedef struct cll_group cll_group;

int cll_context_new(cll_context** out);
void cll_context_free(cll_context* ctx);

/* Runs one experiment config (JSON object with a "command" key). On success *result receives the
   result record; on failure it receives {"error", "message", "command", "config_hash"}. The string
   must be released with cll_string_free. */
int cll_run(cll_context* ctx, const char* config_json, char** result);

/* Message and code of the last failure on this context. */
const char* cll_last_error(const cll_context* ctx);
int cll_last_error_code(const cll_context* ctx);

const char* cll_error_name(int code);
void cll_string_free(char* s);

/* Finite groups from catalog specs (cyclic:m, elem_abelian:l^r, heisenberg:l, ...) or JSON files. */
int cll_group_from_spec(const char* spec, cll_group** out);
void cll_group_free(cll_group* g);
uint32_t cll_group_order(const cll_group* g);
int cll_group_multiply(const cll_group* g, uint32_t a, uint32_t b, uint32_t* out);
/* l-part of the Schur multiplier as primary factor orders; *count receives the number of factors
   and at most cap factors are written. */
int cll_schur_multiplier(const cll_group* g, uint64_t ell, uint64_t* factors, uint32_t cap, uint32_t* count);

const char* cll_version(void);

#ifdef __cplusplus
}
#endif

#endif
