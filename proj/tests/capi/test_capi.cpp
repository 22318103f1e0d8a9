#include <cstring>
#include <string>

#include "cll_capi.h"
#include "json.hpp"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

using json = nlohmann::json;

TEST_CASE("context lifecycle and run") {
  cll_context* ctx = nullptr;
  REQUIRE(cll_context_new(&ctx) == CLL_OK);
  char* out = nullptr;
  CHECK(cll_run(ctx, R"({"command":"schur","group":"heisenberg:3","ell":3})", &out) == CLL_OK);
  REQUIRE(out);
  json r = json::parse(out);
  CHECK(r["multiplier"]["factors"] == json::array({3, 3}));
  cll_string_free(out);
  CHECK(cll_last_error_code(ctx) == CLL_OK);

  int rc = cll_run(ctx, R"({"command":"schur","group":"nonsense:1"})", &out);
  CHECK(rc != CLL_OK);
  CHECK(std::string(cll_error_name(rc)) == "ParseError");
  json e = json::parse(out);
  CHECK(e["error"] == "ParseError");
  CHECK(e["command"] == "schur");
  CHECK(e.contains("config_hash"));
  CHECK(std::strlen(cll_last_error(ctx)) > 0);
  cll_string_free(out);

  rc = cll_run(ctx, "{not json", &out);
  CHECK(std::string(cll_error_name(rc)) == "ParseError");
  cll_string_free(out);
  cll_context_free(ctx);
}

TEST_CASE("group handles") {
  cll_group* g = nullptr;
  REQUIRE(cll_group_from_spec("dihedral:3", &g) == CLL_OK);
  CHECK(cll_group_order(g) == 6);
  uint32_t p = 99;
  CHECK(cll_group_multiply(g, 0, 1, &p) == CLL_OK);
  CHECK(p < 6);
  CHECK(cll_group_multiply(g, 6, 1, &p) != CLL_OK);
  uint64_t f[4];
  uint32_t cnt = 0;
  CHECK(cll_schur_multiplier(g, 3, f, 4, &cnt) == CLL_OK);
  CHECK(cnt == 0);
  cll_group_free(g);
  cll_group* h = nullptr;
  REQUIRE(cll_group_from_spec("elem_abelian:3^2", &h) == CLL_OK);
  CHECK(cll_schur_multiplier(h, 3, f, 4, &cnt) == CLL_OK);
  CHECK(cnt == 1);
  CHECK(f[0] == 3);
  cll_group_free(h);
  cll_group* bad = nullptr;
  CHECK(cll_group_from_spec("bogus", &bad) != CLL_OK);
  CHECK(bad == nullptr);
  CHECK(std::string(cll_version()).size() > 0);
}
