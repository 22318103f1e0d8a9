#include "cll/hurwitz.hpp"

#include <algorithm>
#include <numeric>

#include "cll/zmod.hpp"

namespace cll {

namespace {

uint64_t lcm64(uint64_t a, uint64_t b) { return a / std::gcd(a, b) * b; }

uint64_t mod_pos(int64_t a, uint64_t m) {
  int64_t r = a % static_cast<int64_t>(m);
  return static_cast<uint64_t>(r < 0 ? r + static_cast<int64_t>(m) : r);
}

void fill_lifts(CSetData& d) {
  const FiniteGroup& G = *d.cover.base;
  const FiniteGroup& S = *d.cover.total;
  d.lift.assign(G.order(), S.id());
  for (size_t k = 0; k < d.classes.size(); ++k) {
    Elt rep = d.class_reps[k];
    Elt rl = d.rep_lifts[k];
    require(d.cover.proj(rl) == rep, Err::InvalidArgument, "chosen lift does not cover its representative");
    std::vector<char> done(G.order(), 0);
    for (Elt g = 0; g < G.order(); ++g) {
      Elt x = G.conj(rep, g);
      if (done[x]) continue;
      done[x] = 1;
      d.lift[x] = S.conj(rl, d.cover.fibers[g][0]);
    }
  }
  uint64_t L = 1;
  for (Elt rl : d.rep_lifts) L = lcm64(L, S.elem_order(rl));
  uint64_t e = 1;
  for (Elt k : d.cover.kernel) e = lcm64(e, S.elem_order(k));
  d.kernel_exponent = e;
  d.unit_modulus = lcm64(L, e);
}

std::vector<Elt> power_class_images(const CSetData& d, uint64_t a) {
  const FiniteGroup& G = *d.cover.base;
  std::vector<Elt> out(d.classes.size());
  for (size_t k = 0; k < d.classes.size(); ++k) {
    Elt y = G.pow(d.class_reps[k], static_cast<int64_t>(a));
    int c = d.class_of[y];
    require(c >= 0, Err::QNotCoprime, "powering does not preserve c");
    out[k] = static_cast<Elt>(c);
  }
  return out;
}

uint64_t reduce_unit(const CSetData& d, int64_t alpha) {
  uint64_t a = mod_pos(alpha, d.unit_modulus);
  require(std::gcd(a, d.unit_modulus) == 1 || d.unit_modulus == 1, Err::AlphaNotCoprime,
          "alpha is not a unit modulo the lift exponent");
  return a;
}

}  // namespace

CSetData make_cset_data(const CentralExtension& cover, const CSet& c, const std::vector<Elt>& reps,
                        const std::vector<Elt>& rep_lifts) {
  const FiniteGroup& G = *cover.base;
  CSetData d;
  d.cover = cover;
  d.cset = c;
  d.class_of.assign(G.order(), -1);
  std::vector<char> inc(G.order(), 0);
  for (Elt x : c.members) inc[x] = 1;
  for (const auto& cl : conjugacy_classes(G)) {
    size_t hits = 0;
    for (Elt x : cl) hits += inc[x];
    if (hits == 0) continue;
    require(hits == cl.size(), Err::InvalidArgument, "c is not stable under conjugation");
    std::vector<Elt> sorted = cl;
    std::sort(sorted.begin(), sorted.end());
    d.classes.push_back(sorted);
  }
  std::sort(d.classes.begin(), d.classes.end());
  for (size_t k = 0; k < d.classes.size(); ++k)
    for (Elt x : d.classes[k]) d.class_of[x] = static_cast<int>(k);
  if (reps.empty()) {
    const FiniteGroup& S = *cover.total;
    for (const auto& cl : d.classes) {
      Elt rep = cl.front();
      Elt best = cover.fibers[rep][0];
      for (Elt y : cover.fibers[rep])
        if (S.elem_order(y) < S.elem_order(best)) best = y;
      d.class_reps.push_back(rep);
      d.rep_lifts.push_back(best);
    }
  } else {
    require(reps.size() == d.classes.size() && rep_lifts.size() == reps.size(), Err::InvalidArgument,
            "need one representative and lift per class");
    for (size_t k = 0; k < reps.size(); ++k)
      require(d.class_of[reps[k]] == static_cast<int>(k), Err::InvalidArgument, "representative in wrong class");
    d.class_reps = reps;
    d.rep_lifts = rep_lifts;
  }
  fill_lifts(d);
  d.ab = quotient(cover.base, commutator_subgroup(G));
  return d;
}

CSetData make_cset_data(const CentralExtension& cover, const CSet& c) { return make_cset_data(cover, c, {}, {}); }

CSetData make_cset_data(GroupPtr G, const CSet& c) { return make_cset_data(reduced_schur_cover(G, c), c); }

void check_q(const CSetData& d, int64_t q) {
  require(q >= 1, Err::InvalidArgument, "q must be positive");
  const FiniteGroup& G = *d.cover.base;
  for (Elt x : d.cset.members)
    require(std::gcd<uint64_t, uint64_t>(q, G.elem_order(x)) == 1, Err::QNotCoprime,
            "q is not prime to the order of an element of c");
  require(std::gcd<uint64_t, uint64_t>(q, d.cover.kernel.size()) == 1, Err::QNotCoprime,
          "q is not prime to the covering kernel");
}

std::vector<int> power_permutation(const CSetData& d, int64_t q) {
  check_q(d, q);
  auto img = power_class_images(d, static_cast<uint64_t>(q));
  std::vector<int> out(img.begin(), img.end());
  std::vector<char> seen(out.size(), 0);
  for (int v : out) {
    require(!seen[v], Err::Internal, "powering is not a permutation of classes");
    seen[v] = 1;
  }
  return out;
}

std::vector<std::vector<int>> q_orbits(const CSetData& d, int64_t q) {
  auto perm = power_permutation(d, q);
  std::vector<std::vector<int>> orbits;
  std::vector<char> seen(perm.size(), 0);
  for (size_t k = 0; k < perm.size(); ++k) {
    if (seen[k]) continue;
    std::vector<int> orb;
    int c = static_cast<int>(k);
    while (!seen[c]) {
      seen[c] = 1;
      orb.push_back(c);
      c = perm[c];
    }
    orbits.push_back(orb);
  }
  return orbits;
}

int d_gcq(const CSetData& d, int64_t q) { return static_cast<int>(q_orbits(d, q).size()); }

uint64_t unit_inverse(const CSetData& d, int64_t a) {
  if (d.unit_modulus == 1) return 0;
  uint64_t r = reduce_unit(d, a);
  return mod_inverse(static_cast<int64_t>(r), static_cast<int64_t>(d.unit_modulus));
}

std::vector<Elt> w_alpha(const CSetData& d, int64_t alpha) {
  const FiniteGroup& G = *d.cover.base;
  const FiniteGroup& S = *d.cover.total;
  uint64_t a = reduce_unit(d, alpha);
  std::vector<Elt> w(d.classes.size());
  for (size_t k = 0; k < d.classes.size(); ++k) {
    Elt x = d.class_reps[k];
    Elt xa = G.pow(x, static_cast<int64_t>(a));
    require(d.class_of[xa] >= 0, Err::AlphaNotCoprime, "powering does not preserve c");
    Elt v = S.mul(S.pow(d.rep_lifts[k], -static_cast<int64_t>(a)), d.lift[xa]);
    require(d.cover.proj(v) == G.id(), Err::Internal, "w_alpha outside the kernel");
    w[k] = v;
  }
  return w;
}

Elt W_alpha(const CSetData& d, const std::vector<Elt>& w, const std::vector<int64_t>& m) {
  const FiniteGroup& S = *d.cover.total;
  Elt r = S.id();
  for (size_t k = 0; k < w.size(); ++k)
    if (m[k]) r = S.mul(r, S.pow(w[k], m[k]));
  return r;
}

KElement alpha_star(const CSetData& d, int64_t alpha, const KElement& z) {
  const FiniteGroup& S = *d.cover.total;
  uint64_t a = reduce_unit(d, alpha);
  auto w = w_alpha(d, static_cast<int64_t>(a));
  auto img = power_class_images(d, a);
  KElement out;
  out.h = S.mul(S.pow(z.h, static_cast<int64_t>(a)), W_alpha(d, w, z.m));
  out.m.assign(z.m.size(), 0);
  for (size_t k = 0; k < z.m.size(); ++k) out.m[img[k]] += z.m[k];
  return out;
}

std::vector<std::vector<int64_t>> enumerate_vectors(const CSetData& d, int64_t q, int64_t n, int64_t M) {
  require(n >= 0 && M >= 0, Err::InvalidArgument, "n and M must be nonnegative");
  auto orbits = q_orbits(d, q);
  std::vector<std::vector<int64_t>> out;
  std::vector<int64_t> vals(orbits.size(), 0);
  std::function<void(size_t, int64_t)> rec = [&](size_t i, int64_t rest) {
    if (i == orbits.size()) {
      if (rest != 0) return;
      std::vector<int64_t> m(d.classes.size(), 0);
      for (size_t k = 0; k < orbits.size(); ++k)
        for (int c : orbits[k]) m[c] = vals[k];
      out.push_back(std::move(m));
      return;
    }
    const int64_t s = static_cast<int64_t>(orbits[i].size());
    for (int64_t v = M; v * s <= rest; ++v) {
      vals[i] = v;
      rec(i + 1, rest - v * s);
    }
  };
  if (!orbits.empty()) rec(0, n);
  else if (n == 0) out.push_back({});
  return out;
}

bool in_abelian_kernel(const CSetData& d, const std::vector<int64_t>& m) {
  const FiniteGroup& A = *d.ab.group;
  Elt r = A.id();
  for (size_t k = 0; k < m.size(); ++k)
    if (m[k]) r = A.mul(r, A.pow(d.ab.proj(d.class_reps[k]), m[k]));
  return r == A.id();
}

uint64_t b_count(const CSetData& d, int64_t q, int64_t n, const std::function<bool(Elt)>& filter) {
  check_q(d, q);
  const FiniteGroup& S = *d.cover.total;
  int64_t alpha = static_cast<int64_t>(unit_inverse(d, q));
  auto w = w_alpha(d, alpha);
  std::vector<uint64_t> hits(S.order(), 0);  // number of admissible h with h^{q-1} = key
  for (Elt h : d.cover.kernel)
    if (!filter || filter(h)) hits[S.pow(h, q - 1)]++;
  uint64_t total = 0;
  for (const auto& m : enumerate_vectors(d, q, n, 0)) {
    if (!in_abelian_kernel(d, m)) continue;
    total += hits[S.pow(W_alpha(d, w, m), q)];
  }
  return total;
}

uint64_t count_frobenius_fixed(const CSetData& d, int64_t q, int64_t n, int64_t M) {
  check_q(d, q);
  require(n >= 0 && M >= 0, Err::InvalidArgument, "n and M must be nonnegative");
  int64_t alpha = static_cast<int64_t>(unit_inverse(d, q));
  const size_t C = d.classes.size();
  uint64_t count = 0;
  std::vector<int64_t> m(C, 0);
  std::function<void(size_t, int64_t)> rec = [&](size_t i, int64_t rest) {
    if (i + 1 == C) {
      if (rest < M) return;
      m[i] = rest;
      if (!in_abelian_kernel(d, m)) return;
      for (Elt h : d.cover.kernel) {
        KElement z{h, m};
        if (alpha_star(d, alpha, z) == z) ++count;
      }
      return;
    }
    for (int64_t v = M; v <= rest; ++v) {
      m[i] = v;
      rec(i + 1, rest - v);
    }
  };
  if (C == 0) return n == 0 ? d.cover.kernel.size() : 0;
  rec(0, n);
  return count;
}

namespace {

CentralExtension cover_over_primes(GroupPtr G, const std::vector<uint64_t>& primes) {
  if (!primes.empty()) return schur_cover(G, primes);
  // A prime not dividing |G| yields the trivial extension.
  uint64_t p = 2;
  while (G->order() % p == 0) ++p;
  return schur_cover(G, {p});
}

}  // namespace

DeltaCover make_delta_cover(const GammaGroup& H, int64_t q) {
  DeltaCover dc;
  dc.action = H;
  SemidirectResult sd = semidirect_product(H);
  dc.G = sd.group;
  dc.rho = sd.proj_gamma;
  const FiniteGroup& G = *dc.G;
  GroupPtr Gam = H.gamma;
  require(std::gcd<uint64_t, uint64_t>(H.group->order(), Gam->order()) == 1, Err::OrdersNotCoprime,
          "|H| and |Gamma| must be coprime");
  std::vector<Elt> m1, m2;
  for (Elt x = 0; x < G.order(); ++x)
    if (x != G.id() && G.elem_order(x) == Gam->elem_order(dc.rho(x))) m1.push_back(x);
  for (Elt g = 0; g < Gam->order(); ++g)
    if (g != Gam->id()) m2.push_back(g);
  dc.c1 = CSet::make(dc.G, m1);
  dc.c2 = CSet::make(Gam, m2);

  std::vector<uint64_t> primes;
  for (uint64_t p : prime_factors(G.order()))
    if ((static_cast<uint64_t>(q) * Gam->order()) % p != 0) primes.push_back(p);
  dc.sprime = cover_over_primes(dc.G, primes);
  CentralExtension s2 = reduced_schur_cover(Gam, dc.c2);
  dc.d2 = make_cset_data(s2, dc.c2);

  const FiniteGroup& A = *dc.sprime.total;
  const FiniteGroup& B = *s2.total;
  std::vector<int64_t> index(static_cast<size_t>(A.order()) * B.order(), -1);
  std::vector<std::pair<Elt, Elt>> pairs;
  for (Elt s = 0; s < A.order(); ++s)
    for (Elt t = 0; t < B.order(); ++t)
      if (dc.rho(dc.sprime.proj(s)) == s2.proj(t)) {
        index[static_cast<size_t>(s) * B.order() + t] = static_cast<int64_t>(pairs.size());
        pairs.push_back({s, t});
      }
  const uint32_t N = static_cast<uint32_t>(pairs.size());
  require(N <= kTableCap, Err::CapExceeded, "fiber product exceeds the table cap");
  std::vector<Elt> flat(static_cast<size_t>(N) * N);
  for (uint32_t i = 0; i < N; ++i)
    for (uint32_t j = 0; j < N; ++j) {
      Elt s = A.mul(pairs[i].first, pairs[j].first), t = B.mul(pairs[i].second, pairs[j].second);
      flat[static_cast<size_t>(i) * N + j] = static_cast<Elt>(index[static_cast<size_t>(s) * B.order() + t]);
    }
  Elt one = static_cast<Elt>(index[static_cast<size_t>(A.id()) * B.order() + B.id()]);
  GroupPtr S1 = make_group(FiniteGroup::from_flat(N, std::move(flat), one, false));
  std::vector<Elt> proj(N);
  dc.phi.resize(N);
  dc.to_s2.resize(N);
  for (uint32_t i = 0; i < N; ++i) {
    proj[i] = dc.sprime.proj(pairs[i].first);
    dc.phi[i] = pairs[i].first;
    dc.to_s2[i] = pairs[i].second;
  }
  dc.d1 = make_cset_data(make_central_extension(S1, dc.G, std::move(proj)), dc.c1);
  dc.reduced_kernel_order = reduced_schur_cover(dc.G, dc.c1).kernel.size();
  return dc;
}

Elt eta_from_coords(const DeltaCover& dc, const std::vector<uint64_t>& coords) {
  if (dc.sprime.kernel.size() == 1) return dc.sprime.total->id();
  require(coords.size() == dc.sprime.kernel_data.structure.factors.size(), Err::InvalidArgument,
          "delta coordinates do not match the kernel of S'");
  return dc.sprime.kernel_data.element_of(coords);
}

uint64_t b_count_delta(const DeltaCover& dc, int64_t q, int64_t n, Elt eta) {
  require(std::binary_search(dc.sprime.kernel.begin(), dc.sprime.kernel.end(), eta), Err::InvalidArgument,
          "eta is not in the kernel of S'");
  return b_count(dc.d1, q, n, [&](Elt h) { return dc.phi[h] == eta; });
}

}  // namespace cll
