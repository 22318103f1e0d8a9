#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cll_capi.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

// Options are copied into the config only when given on the command line.
struct Opts {
  std::map<const CLI::App*, std::vector<std::function<void(json&)>>> setters;
};

template <typename T>
void opt(CLI::App* app, Opts& o, const std::string& flag, const std::string& key, const std::string& help,
         bool required = false) {
  auto holder = std::make_shared<T>();
  CLI::Option* op = app->add_option(flag, *holder, help);
  if (required) op->required();
  o.setters[app].push_back([holder, op, key](json& cfg) {
    if (op->count() > 0) cfg[key] = *holder;
  });
}

int exit_code_for(int rc, const json& res) {
  if (rc == 0) {
    if (res.value("command", std::string()) == "regress" && !res.value("all_pass", true)) return 3;
    return 0;
  }
  const std::string name = res.value("error", std::string());
  if (name == "ParseError" || name == "InvalidArgument" || name == "BadIndex" || name == "IoError") return 1;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cll: groups, coverings, Hurwitz counts and random group moments"};
  app.require_subcommand(1);
  Opts o;
  std::string config_file;

  auto common = [&](CLI::App* s) {
    opt<std::string>(s, o, "--out", "out", "append the result record to this JSON-lines file");
  };
  auto sampling = [&](CLI::App* s) {
    opt<uint64_t>(s, o, "--samples", "samples", "number of samples");
    opt<uint64_t>(s, o, "--seed", "seed", "master seed");
    opt<int>(s, o, "--threads", "threads", "worker threads (CLL_THREADS overrides)");
  };

  auto* schur = app.add_subcommand("schur", "l-part of the Schur multiplier");
  opt<std::string>(schur, o, "--group", "group", "catalog spec or JSON file", true);
  opt<uint64_t>(schur, o, "--ell", "ell", "prime (all primes when omitted)");
  common(schur);

  auto* cover = app.add_subcommand("cover", "Schur covering or reduced covering");
  opt<std::string>(cover, o, "--group", "group", "catalog spec or JSON file", true);
  opt<uint64_t>(cover, o, "--ell", "ell", "prime (all primes when omitted)");
  opt<std::string>(cover, o, "--reduced-c", "reduced_c", "c-set spec for the reduced covering");
  opt<std::string>(cover, o, "--export", "export", "write the covering group as a JSON table");
  common(cover);

  auto* li = app.add_subcommand("lifting-invariant", "lifting invariant of a product-one generating tuple");
  opt<std::string>(li, o, "--group", "group", "catalog spec or JSON file", true);
  opt<std::vector<uint32_t>>(li, o, "--tuple", "tuple", "element indices", true);
  opt<uint64_t>(li, o, "--ell", "ell", "prime");
  opt<std::string>(li, o, "--reduced-c", "reduced_c", "c-set spec for the reduced covering");
  common(li);

  auto* hb = app.add_subcommand("hurwitz-b", "component count b(G, c, q, n)");
  opt<std::string>(hb, o, "--group", "group", "group spec (H when --gamma is given)", true);
  opt<std::string>(hb, o, "--gamma", "gamma", "Gamma = Z/2 action on H: inversion or trivial");
  opt<std::string>(hb, o, "--cset", "cset", "c-set spec without --gamma (default all)");
  opt<int64_t>(hb, o, "--q", "q", "q", true);
  opt<int64_t>(hb, o, "--n", "n", "n", true);
  opt<std::string>(hb, o, "--delta", "delta", "kernel coordinates, comma separated");
  common(hb);

  auto* hf = app.add_subcommand("hurwitz-fixed", "Frobenius-fixed invariant count");
  opt<std::string>(hf, o, "--group", "group", "group spec (default cyclic:2)");
  opt<std::string>(hf, o, "--cset", "cset", "c-set spec (default all)");
  opt<int64_t>(hf, o, "--q", "q", "q", true);
  opt<int64_t>(hf, o, "--n", "n", "n", true);
  opt<int64_t>(hf, o, "--min", "min", "lower bound M on coordinates", true);
  common(hf);

  auto* rm = app.add_subcommand("relator-matrix", "antisymmetric matrix of a relator");
  opt<int>(rm, o, "--n", "n", "genus n (2n generators)", true);
  opt<uint32_t>(rm, o, "--ell", "ell", "prime (default 3)");
  opt<std::string>(rm, o, "--word", "word", "word such as [x1,x2][x3,x4] (default standard)");
  common(rm);

  auto* pi = app.add_subcommand("pairing-image", "pairing exponents of a relator in a finite group");
  opt<std::string>(pi, o, "--group", "group", "JSON file or catalog spec", true);
  opt<std::string>(pi, o, "--lambda", "lambda", "relator word in the stored generators", true);
  opt<uint64_t>(pi, o, "--ell", "ell", "prime (default 3)");
  opt<int>(pi, o, "--exp-n", "exp_n", "root of unity order exponent (default 1)");
  common(pi);

  auto* my = app.add_subcommand("moment-y", "Y / X moment estimate");
  opt<int>(my, o, "--n", "n", "n", true);
  opt<uint32_t>(my, o, "--ell", "ell", "prime (default 3)");
  opt<int64_t>(my, o, "--q", "q", "q", true);
  opt<std::string>(my, o, "--H", "H", "Gamma-group spec, e.g. cyclic:3@inversion", true);
  opt<std::string>(my, o, "--delta", "delta", "covering kernel coordinates (default identity)");
  opt<int>(my, o, "--class", "class", "truncation class (default 2)");
  opt<bool>(my, o, "--sigma-conjugate", "sigma_conjugate", "use a conjugated involution");
  opt<uint64_t>(my, o, "--sigma-seed", "sigma_seed", "seed of the conjugator");
  sampling(my);
  common(my);

  auto* mz = app.add_subcommand("moment-z", "Z moment estimate");
  opt<int>(mz, o, "--n", "n", "n", true);
  opt<uint32_t>(mz, o, "--ell", "ell", "prime (default 3)");
  opt<std::vector<std::string>>(mz, o, "--H", "H", "group spec(s); several share one sample stream", true);
  opt<int>(mz, o, "--class", "class", "truncation class (default 2)");
  sampling(mz);
  common(mz);

  auto* oc = app.add_subcommand("orbit-check", "orbit transitivity on equivariant surjections");
  opt<int>(oc, o, "--n", "n", "n", true);
  opt<uint32_t>(oc, o, "--ell", "ell", "prime (default 3)");
  opt<int64_t>(oc, o, "--q", "q", "q", true);
  opt<std::string>(oc, o, "--H", "H", "Gamma-group spec", true);
  opt<int>(oc, o, "--pairs", "pairs", "random pairs for the witness method");
  opt<uint64_t>(oc, o, "--seed", "seed", "seed");
  common(oc);

  auto* rg = app.add_subcommand("regress", "rerun a manifest and compare with stored targets");
  opt<std::string>(rg, o, "--manifest", "manifest", "manifest JSON file", true);
  common(rg);

  auto* run = app.add_subcommand("run", "run a raw JSON config file");
  run->add_option("config", config_file, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  json cfg;
  if (!config_file.empty()) {
    std::ifstream f(config_file);
    if (!f) {
      std::cerr << "cannot read " << config_file << "\n";
      return 1;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      cfg = json::parse(ss.str());
    } catch (const json::exception& e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
  } else {
    const CLI::App* sub = app.get_subcommands().front();
    cfg = json::object();
    for (auto& set : o.setters[sub]) set(cfg);
    cfg["command"] = sub->get_name();
  }

  cll_context* ctx = nullptr;
  cll_context_new(&ctx);
  char* out = nullptr;
  int rc = cll_run(ctx, cfg.dump().c_str(), &out);
  json res = json::parse(out ? out : "{}");
  cll_string_free(out);
  cll_context_free(ctx);
  if (rc == 0)
    std::cout << res.dump() << "\n";
  else
    std::cerr << res.dump() << "\n";
  return exit_code_for(rc, res);
}
