#include "cll/driver.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "cll/cohomology.hpp"
#include "cll/harness.hpp"
#include "cll/hurwitz.hpp"
#include "cll/nilpotent.hpp"
#include "cll/random_models.hpp"

namespace cll {

namespace {

template <typename T>
T get(const json& cfg, const char* key) {
  require(cfg.contains(key), Err::InvalidArgument, std::string("missing parameter '") + key + "'");
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    fail(Err::InvalidArgument, std::string("parameter '") + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const json& cfg, const char* key, T dflt) {
  return cfg.contains(key) && !cfg.at(key).is_null() ? get<T>(cfg, key) : dflt;
}

std::vector<uint64_t> parse_coords(const json& v) {
  if (v.is_null()) return {};
  if (v.is_array()) return v.get<std::vector<uint64_t>>();
  std::vector<uint64_t> out;
  std::string s = v.get<std::string>();
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoull(tok));
    } catch (...) {
      fail(Err::ParseError, "bad coordinate list '" + s + "'");
    }
  }
  return out;
}

std::string timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json estimate_json(const MomentEstimate& e) {
  json j = {{"mean", e.mean}, {"stderr", e.stderr_}, {"samples", e.samples}, {"seed", e.seed},
            {"all_zero", e.all_zero}};
  if (e.has_target) {
    j["target"] = e.target;
    double s = e.sigmas_off();
    j["sigmas_off"] = std::isfinite(s) ? json(s) : json(nullptr);
  }
  return j;
}

json structure_json(const AbelianStructure& a) { return json{{"factors", a.factors}, {"order", a.order()}}; }

// All primes when ell is absent.
AbelianStructure multiplier(GroupPtr G, const json& cfg) {
  if (cfg.contains("ell")) return schur_multiplier_l(G, get<uint64_t>(cfg, "ell"));
  std::vector<uint64_t> f;
  for (uint64_t p : prime_factors(G->order())) {
    auto s = schur_multiplier_l(G, p);
    f.insert(f.end(), s.factors.begin(), s.factors.end());
  }
  return normalize_factors(f);
}

json cmd_schur(const json& cfg) {
  GroupPtr G = catalog_group(get<std::string>(cfg, "group"));
  return json{{"group_order", G->order()}, {"multiplier", structure_json(multiplier(G, cfg))}};
}

json cmd_cover(const json& cfg) {
  GroupPtr G = catalog_group(get<std::string>(cfg, "group"));
  std::vector<uint64_t> primes;
  if (cfg.contains("ell")) primes.push_back(get<uint64_t>(cfg, "ell"));
  CentralExtension ext;
  if (cfg.contains("reduced_c"))
    ext = reduced_schur_cover(G, cset_from_spec(G, get<std::string>(cfg, "reduced_c")), primes);
  else
    ext = schur_cover(G, primes);
  json out = {{"group_order", G->order()},
              {"total_order", ext.total->order()},
              {"kernel", structure_json(ext.kernel_data.structure)},
              {"central_verified", ext.central_verified},
              {"stem_verified", ext.stem_verified},
              {"cocycle_hash", ext.cocycle_hash}};
  if (cfg.contains("export")) {
    std::string path = get<std::string>(cfg, "export");
    json tab = json::parse(group_to_json(*ext.total));
    tab["projection"] = ext.proj.map;
    atomic_write(path, tab.dump() + "\n");
    out["exported"] = path;
  }
  return out;
}

json cmd_lifting_invariant(const json& cfg) {
  GroupPtr G = catalog_group(get<std::string>(cfg, "group"));
  std::vector<Elt> tuple = get<std::vector<Elt>>(cfg, "tuple");
  for (Elt x : tuple) require(x < G->order(), Err::BadIndex, "tuple element out of range");
  std::vector<uint64_t> primes;
  if (cfg.contains("ell")) primes.push_back(get<uint64_t>(cfg, "ell"));
  CentralExtension ext = cfg.contains("reduced_c")
                             ? reduced_schur_cover(G, cset_from_spec(G, get<std::string>(cfg, "reduced_c")), primes)
                             : schur_cover(G, primes);
  Elt v = lifting_invariant(tuple, ext);
  return json{{"element", v}, {"kernel_coords", ext.kernel_coords(v)}, {"kernel", structure_json(ext.kernel_data.structure)}};
}

json orbit_data(const CSetData& d, int64_t q) {
  json classes = json::array();
  for (size_t k = 0; k < d.num_classes(); ++k)
    classes.push_back({{"representative", d.class_reps[k]}, {"size", d.classes[k].size()}});
  return json{{"classes", classes}, {"q_orbits", q_orbits(d, q)}};
}

json cmd_hurwitz_b(const json& cfg) {
  const std::string spec = get<std::string>(cfg, "group");
  const int64_t q = get<int64_t>(cfg, "q"), n = get<int64_t>(cfg, "n");
  require(n >= 0, Err::InvalidArgument, "n must be >= 0");
  json out = {{"seed_free", true}, {"q", q}, {"n", n}};
  if (cfg.contains("gamma")) {
    GammaGroup H = gamma_group_from_spec(spec + "@" + get<std::string>(cfg, "gamma"));
    DeltaCover dc = make_delta_cover(H, q);
    uint64_t count;
    if (cfg.contains("delta")) {
      Elt eta = eta_from_coords(dc, parse_coords(cfg.at("delta")));
      count = b_count_delta(dc, q, n, eta);
      out["delta_order"] = dc.sprime.total->elem_order(eta);
    } else {
      count = b_count(dc.d1, q, n);
    }
    out["count"] = count;
    out["gamma_side_count"] = b_count(dc.d2, q, n);
    out["d"] = d_gcq(dc.d1, q);
    out["orbit_data"] = orbit_data(dc.d1, q);
    out["delta_kernel"] = structure_json(dc.sprime.kernel_data.structure);
    return out;
  }
  require(!cfg.contains("delta"), Err::InvalidArgument, "delta needs a Gamma action (--gamma)");
  GroupPtr G = catalog_group(spec);
  CSetData d = make_cset_data(G, cset_from_spec(G, get_or<std::string>(cfg, "cset", "all")));
  out["count"] = b_count(d, q, n);
  out["d"] = d_gcq(d, q);
  out["orbit_data"] = orbit_data(d, q);
  return out;
}

json cmd_hurwitz_fixed(const json& cfg) {
  GroupPtr G = catalog_group(get_or<std::string>(cfg, "group", "cyclic:2"));
  CSetData d = make_cset_data(G, cset_from_spec(G, get_or<std::string>(cfg, "cset", "all")));
  const int64_t q = get<int64_t>(cfg, "q"), n = get<int64_t>(cfg, "n"), M = get<int64_t>(cfg, "min");
  require(n >= 0 && M >= 0, Err::InvalidArgument, "n and min must be >= 0");
  return json{{"count", count_frobenius_fixed(d, q, n, M)},
              {"b", b_count(d, q, n)},
              {"d", d_gcq(d, q)},
              {"orbit_data", orbit_data(d, q)},
              {"seed_free", true}};
}

json cmd_relator_matrix(const json& cfg) {
  const int n = get<int>(cfg, "n");
  const uint32_t ell = get_or<uint32_t>(cfg, "ell", 3);
  require(n >= 1, Err::InvalidArgument, "n must be >= 1");
  Word w = cfg.contains("word") ? parse_word(get<std::string>(cfg, "word")) : standard_relator(n);
  for (const auto& l : w) require(static_cast<int>(l.gen) < 2 * n, Err::BadIndex, "word uses a generator beyond x_2n");
  FreeNilpotent F(2 * n, 2, ell);
  FMat M = relator_matrix(F, F.eval(w));
  json rows = json::array();
  for (size_t i = 0; i < M.rows; ++i) {
    json r = json::array();
    for (size_t j = 0; j < M.cols; ++j) {
      int64_t v = M(i, j);
      r.push_back(v > static_cast<int64_t>(ell) / 2 ? v - static_cast<int64_t>(ell) : v);
    }
    rows.push_back(r);
  }
  return json{{"matrix", rows}, {"modulus", ell}, {"word", word_to_string(w)}};
}

json cmd_pairing_image(const json& cfg) {
  GroupPtr G = catalog_group(get<std::string>(cfg, "group"));
  const uint64_t ell = get_or<uint64_t>(cfg, "ell", 3);
  const int n = get_or<int>(cfg, "exp_n", 1);
  Word w = parse_word(get<std::string>(cfg, "lambda"));
  PairingImage p = pairing_image(G, G->gens(), w, ell, n);
  return json{{"b", p.b}, {"f", p.f}, {"dual_log", p.dual_log}, {"modulus", p.modulus}};
}

json cmd_moment_y(const json& cfg) {
  YMomentConfig c;
  c.n = get<int>(cfg, "n");
  c.ell = get_or<uint32_t>(cfg, "ell", 3);
  c.cls = get_or<int>(cfg, "class", 2);
  c.q = get<int64_t>(cfg, "q");
  c.H = gamma_group_from_spec(get<std::string>(cfg, "H"));
  c.delta = parse_coords(cfg.value("delta", json(nullptr)));
  c.samples = get_or<uint64_t>(cfg, "samples", 100000);
  c.seed = get_or<uint64_t>(cfg, "seed", 1);
  c.threads = effective_threads(get_or<int>(cfg, "threads", 1));
  c.sigma_conjugate = get_or<bool>(cfg, "sigma_conjugate", false);
  c.sigma_seed = get_or<uint64_t>(cfg, "sigma_seed", 0);
  YMomentReport r = estimate_moment_y(c);
  json out = estimate_json(r.y_delta);
  out["statistic"] = "Y";
  out["citation"] = "expected count 1/[H:H^Gamma] of Gamma-surjections with the given lifted invariant";
  out["x"] = estimate_json(r.x_delta);
  out["x"]["citation"] = "expected count 1 of surjections onto H x| Gamma with the given lifted invariant";
  out["y_total"] = estimate_json(r.y_total);
  out["x_total"] = estimate_json(r.x_total);
  out["x_minus_index_y"] = estimate_json(r.x_minus_index_y);
  if (r.has_matrix) {
    out["matrix"] = estimate_json(r.matrix);
    out["matrix_minus_group"] = estimate_json(r.matrix_minus_group);
  }
  out["fixed_index"] = r.fixed_index;
  out["delta_order"] = r.delta_order;
  out["delta_order_violation"] = r.delta_order_violation;
  out["warnings"] = r.delta_order_violation ? json::array({"DeltaOrderViolation"}) : json::array();
  out["surjection_fraction"] = r.surjection_fraction;
  out["threads"] = c.threads;
  return out;
}

json cmd_moment_z(const json& cfg) {
  ZMomentConfig c;
  c.n = get<int>(cfg, "n");
  c.ell = get_or<uint32_t>(cfg, "ell", 3);
  c.cls = get_or<int>(cfg, "class", 2);
  c.samples = get_or<uint64_t>(cfg, "samples", 100000);
  c.seed = get_or<uint64_t>(cfg, "seed", 1);
  c.threads = effective_threads(get_or<int>(cfg, "threads", 1));
  std::vector<std::string> specs;
  const json& h = cfg.at("H");
  if (h.is_array())
    specs = h.get<std::vector<std::string>>();
  else
    specs.push_back(h.get<std::string>());
  for (const auto& s : specs) c.targets.push_back(catalog_group(s));
  auto res = estimate_moment_z(c);
  json list = json::array();
  for (size_t i = 0; i < res.size(); ++i) {
    json e = estimate_json(res[i]);
    e["H"] = specs[i];
    e["citation"] = "|[H,H]| |H_2(H,Z)|";
    list.push_back(e);
  }
  if (list.size() == 1) {
    json out = list[0];
    out["threads"] = c.threads;
    return out;
  }
  return json{{"results", list}, {"threads", c.threads}};
}

json cmd_orbit_check(const json& cfg) {
  const int n = get<int>(cfg, "n");
  const uint32_t ell = get_or<uint32_t>(cfg, "ell", 3);
  const int64_t q = get<int64_t>(cfg, "q");
  GammaGroup H = gamma_group_from_spec(get<std::string>(cfg, "H"));
  const bool exhaustive = get_or<bool>(cfg, "exhaustive", n == 1);
  OrbitReport r;
  if (exhaustive) {
    require(n == 1, Err::InvalidArgument, "exhaustive orbit check supports n = 1 only");
    r = orbit_check_exhaustive(ell, q, H);
  } else {
    r = orbit_check_witness(n, ell, q, H, get_or<int>(cfg, "pairs", 100), get_or<uint64_t>(cfg, "seed", 1));
  }
  return json{{"method", exhaustive ? "exhaustive" : "witness"},
              {"transitive", r.transitive},
              {"surjections", r.surjections},
              {"automorphisms", r.automorphisms},
              {"invariant_classes", r.invariant_classes},
              {"orbits", r.orbits},
              {"pairs_checked", r.pairs_checked},
              {"witness_failures", r.witness_failures}};
}

const json* lookup(const json& j, const std::string& path) {
  const json* cur = &j;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!cur->is_object() || !cur->contains(part)) return nullptr;
    cur = &cur->at(part);
  }
  return cur;
}

}  // namespace

std::string canonical_config(const json& cfg) {
  json c = cfg;
  c.erase("out");
  return c.dump();
}

std::string config_hash(const json& cfg) { return fnv1a_hex(canonical_config(cfg)); }

json run_config(const json& cfg) {
  require(cfg.is_object(), Err::InvalidArgument, "config must be a JSON object");
  const std::string cmd = get<std::string>(cfg, "command");
  json body;
  if (cmd == "schur")
    body = cmd_schur(cfg);
  else if (cmd == "cover")
    body = cmd_cover(cfg);
  else if (cmd == "lifting-invariant")
    body = cmd_lifting_invariant(cfg);
  else if (cmd == "hurwitz-b")
    body = cmd_hurwitz_b(cfg);
  else if (cmd == "hurwitz-fixed")
    body = cmd_hurwitz_fixed(cfg);
  else if (cmd == "relator-matrix")
    body = cmd_relator_matrix(cfg);
  else if (cmd == "pairing-image")
    body = cmd_pairing_image(cfg);
  else if (cmd == "moment-y")
    body = cmd_moment_y(cfg);
  else if (cmd == "moment-z")
    body = cmd_moment_z(cfg);
  else if (cmd == "orbit-check")
    body = cmd_orbit_check(cfg);
  else if (cmd == "regress") {
    std::ifstream f(get<std::string>(cfg, "manifest"));
    require(static_cast<bool>(f), Err::IoError, "cannot read manifest");
    json m;
    try {
      m = json::parse(f);
    } catch (const json::exception& e) {
      fail(Err::ParseError, std::string("manifest: ") + e.what());
    }
    body = regression_suite(m);
  } else
    fail(Err::InvalidArgument, "unknown command '" + cmd + "'");
  json rec = body;
  rec["command"] = cmd;
  rec["config_hash"] = config_hash(cfg);
  rec["config"] = json::parse(canonical_config(cfg));
  rec["timestamp"] = timestamp();
  if (cfg.contains("out")) atomic_append_line(get<std::string>(cfg, "out"), rec.dump());
  return rec;
}

json regression_suite(const json& manifest) {
  json entries = json::array();
  uint64_t passed = 0, failed = 0;
  const json list = manifest.is_array() ? manifest : manifest.value("entries", json::array());
  for (const auto& e : list) {
    json rep = {{"name", e.value("name", std::string("unnamed"))}};
    bool ok = true;
    json details = json::array();
    try {
      json cfg = e.at("config");
      cfg.erase("out");
      json res = run_config(cfg);
      const json expect = e.value("expect", json::object());
      for (const auto& [key, want] : expect.items()) {
        const json* got = lookup(res, key);
        json d = {{"key", key}, {"expected", want}, {"got", got ? *got : json(nullptr)}};
        bool good = false;
        if (got && want.is_object() && want.contains("target")) {
          std::string base = key.find('.') == std::string::npos ? "" : key.substr(0, key.rfind('.') + 1);
          const json* se = lookup(res, base + "stderr");
          double sig = want.value("sigmas", 3.0);
          double diff = std::abs(got->get<double>() - want.at("target").get<double>());
          double s = se ? se->get<double>() : 0.0;
          good = diff <= sig * s || diff < 1e-12;
          d["stderr"] = s;
        } else if (got) {
          if (got->is_number() && want.is_number())
            good = std::abs(got->get<double>() - want.get<double>()) < 1e-9;
          else
            good = *got == want;
        }
        d["pass"] = good;
        ok &= good;
        details.push_back(d);
      }
    } catch (const Error& err) {
      ok = false;
      details.push_back({{"error", err_name(err.code())}, {"message", err.what()}});
    } catch (const std::exception& err) {
      ok = false;
      details.push_back({{"error", "InvalidArgument"}, {"message", err.what()}});
    }
    rep["pass"] = ok;
    rep["checks"] = details;
    (ok ? passed : failed)++;
    entries.push_back(rep);
  }
  return json{{"entries", entries}, {"passed", passed}, {"failed", failed}, {"all_pass", failed == 0}};
}

}  // namespace cll
