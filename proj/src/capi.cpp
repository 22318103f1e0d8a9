#include "cll_capi.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "cll/cohomology.hpp"
#include "cll/driver.hpp"
#include "cll/group.hpp"

struct cll_context {
  std::string last_error;
  int last_code = CLL_OK;
};

struct cll_group {
  cll::GroupPtr g;
};

namespace {

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

int code_of(cll::Err e) { return static_cast<int>(e); }

template <typename F>
int guarded(cll_context* ctx, F&& f) {
  try {
    f();
    if (ctx) {
      ctx->last_code = CLL_OK;
      ctx->last_error.clear();
    }
    return CLL_OK;
  } catch (const cll::Error& e) {
    if (ctx) {
      ctx->last_code = code_of(e.code());
      ctx->last_error = e.what();
    }
    return code_of(e.code());
  } catch (const std::exception& e) {
    if (ctx) {
      ctx->last_code = code_of(cll::Err::Internal);
      ctx->last_error = e.what();
    }
    return code_of(cll::Err::Internal);
  }
}

}  // namespace

extern "C" {

int cll_context_new(cll_context** out) {
  if (!out) return code_of(cll::Err::InvalidArgument);
  *out = new cll_context();
  return CLL_OK;
}

void cll_context_free(cll_context* ctx) { delete ctx; }

int cll_run(cll_context* ctx, const char* config_json, char** result) {
  if (!config_json || !result) return code_of(cll::Err::InvalidArgument);
  *result = nullptr;
  cll::json cfg;
  std::string out;
  int rc = guarded(ctx, [&] {
    try {
      cfg = cll::json::parse(config_json);
    } catch (const cll::json::exception& e) {
      cll::fail(cll::Err::ParseError, std::string("config: ") + e.what());
    }
    try {
      out = cll::run_config(cfg).dump();
    } catch (const cll::json::exception& e) {
      cll::fail(cll::Err::InvalidArgument, std::string("config: ") + e.what());
    }
  });
  if (rc != CLL_OK) {
    cll::json err = {{"error", cll_error_name(rc)}, {"message", ctx ? ctx->last_error : std::string()}};
    if (cfg.is_object()) {
      err["command"] = cfg.value("command", std::string());
      err["config_hash"] = cll::config_hash(cfg);
    }
    out = err.dump();
  }
  *result = dup_string(out);
  return rc;
}

const char* cll_last_error(const cll_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

int cll_last_error_code(const cll_context* ctx) { return ctx ? ctx->last_code : CLL_OK; }

const char* cll_error_name(int code) { return cll::err_name(static_cast<cll::Err>(code)); }

void cll_string_free(char* s) { std::free(s); }

int cll_group_from_spec(const char* spec, cll_group** out) {
  if (!spec || !out) return code_of(cll::Err::InvalidArgument);
  *out = nullptr;
  return guarded(nullptr, [&] { *out = new cll_group{cll::catalog_group(spec)}; });
}

void cll_group_free(cll_group* g) { delete g; }

uint32_t cll_group_order(const cll_group* g) { return g ? g->g->order() : 0; }

int cll_group_multiply(const cll_group* g, uint32_t a, uint32_t b, uint32_t* out) {
  if (!g || !out) return code_of(cll::Err::InvalidArgument);
  if (a >= g->g->order() || b >= g->g->order()) return code_of(cll::Err::BadIndex);
  *out = g->g->mul(a, b);
  return CLL_OK;
}

int cll_schur_multiplier(const cll_group* g, uint64_t ell, uint64_t* factors, uint32_t cap, uint32_t* count) {
  if (!g || !count) return code_of(cll::Err::InvalidArgument);
  return guarded(nullptr, [&] {
    auto s = cll::schur_multiplier_l(g->g, ell);
    *count = static_cast<uint32_t>(s.factors.size());
    for (uint32_t i = 0; i < *count && i < cap && factors; ++i) factors[i] = s.factors[i];
  });
}

const char* cll_version(void) { return "1.0.0"; }

}  // extern "C"
