#include "cll/random_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "cll/harness.hpp"

namespace cll {

FrattiniQuotient frattini_quotient(const FiniteGroup& G, uint32_t ell) {
  std::vector<Elt> seeds;
  for (Elt a : G.gens())
    for (Elt b : G.gens()) seeds.push_back(G.comm(a, b));
  for (Elt x = 0; x < G.order(); ++x) seeds.push_back(G.pow(x, ell));
  Subgroup P = normal_closure(G, seeds);
  auto Gp = std::make_shared<const FiniteGroup>(G);
  QuotientResult q = quotient(Gp, P);
  const FiniteGroup& Q = *q.group;
  std::vector<int64_t> code(Q.order(), -1);
  std::vector<FVec> qc;
  std::vector<Elt> members{Q.id()};
  code[Q.id()] = 0;
  qc.push_back(FVec{});
  uint32_t dim = 0;
  for (Elt x = 0; x < Q.order(); ++x) {
    if (code[x] >= 0) continue;
    ++dim;
    for (auto& c : qc) c.push_back(0);
    std::vector<Elt> cur = members;
    std::vector<FVec> curc = qc;
    Elt px = Q.id();
    for (uint32_t k = 1; k < ell; ++k) {
      px = Q.mul(px, x);
      for (size_t i = 0; i < cur.size(); ++i) {
        Elt y = Q.mul(cur[i], px);
        require(code[y] < 0, Err::Internal, "Frattini quotient is not elementary abelian");
        FVec c = curc[i];
        c.back() = k;
        code[y] = static_cast<int64_t>(qc.size());
        qc.push_back(std::move(c));
        members.push_back(y);
      }
    }
  }
  FrattiniQuotient out;
  out.dim = dim;
  out.coords.resize(G.order());
  for (Elt g = 0; g < G.order(); ++g) out.coords[g] = qc[code[q.proj(g)]];
  return out;
}

namespace {

void check_target_shape(const FiniteGroup& H, uint32_t ell, int cls) {
  for (Elt x = 0; x < H.order(); ++x)
    require(ell % H.elem_order(x) == 0, Err::InvalidArgument, "target must have exponent dividing l");
  auto lcs = lower_central_series(H);
  require(static_cast<int>(lcs.size()) <= cls + 1 && lcs.back().size() == 1, Err::InvalidArgument,
          "target nilpotency class exceeds the truncation class");
}

}  // namespace

TargetGroup make_target(const GammaGroup& H, uint32_t ell, int cls, bool with_cover) {
  require(H.gamma->order() == 2, Err::InvalidArgument, "Gamma must have order 2");
  check_target_shape(*H.group, ell, cls);
  TargetGroup T;
  T.H = H;
  T.ell = ell;
  T.gamma_gen = H.gamma->id() == 0 ? 1 : 0;
  const uint32_t n = H.group->order();
  T.gamma_img.resize(n);
  for (Elt h = 0; h < n; ++h) T.gamma_img[h] = H.act(T.gamma_gen, h);
  T.sd = semidirect_product(H);
  if (with_cover) T.cover = l_schur_cover(T.sd.group, ell);
  T.frattini = frattini_quotient(*H.group, ell);
  T.fixed_index = fixed_index(H);
  return T;
}

TargetGroup make_plain_target(GroupPtr H, uint32_t ell, int cls) {
  return make_target(GammaGroup::trivial(H, cyclic_group(2)), ell, cls, false);
}

DeltaTarget make_delta(const TargetGroup& T, const std::vector<uint64_t>& coords) {
  require(T.has_cover(), Err::InvalidArgument, "target has no covering");
  DeltaTarget d;
  const auto& kd = T.cover.kernel_data;
  if (coords.empty()) {
    d.value = T.cover.total->id();
  } else {
    require(coords.size() == kd.structure.factors.size(), Err::InvalidArgument,
            "delta needs one coordinate per factor of the covering kernel");
    d.value = kd.element_of(coords);
  }
  d.order = T.cover.total->elem_order(d.value);
  return d;
}

Elt pi_dagger(const TargetGroup& T, const Word& relator, const std::vector<Elt>& images, std::mt19937_64* rng) {
  const FiniteGroup& S = *T.cover.total;
  std::vector<Elt> lifts(images.size());
  for (size_t i = 0; i < images.size(); ++i) {
    const auto& fib = T.cover.fibers[T.sd.emb_h(images[i])];
    lifts[i] = rng ? fib[(*rng)() % fib.size()] : fib[0];
  }
  Elt v = eval_word(S, lifts, relator);
  require(T.cover.proj(v) == T.cover.base->id(), Err::RelatorNotKilled, "relator is not killed by the images");
  return v;
}

// ---------------------------------------------------------------- ideals and presentations

Echelon ideal_closure(const DemushkinTrunc& D, const std::vector<FVec>& seeds, bool sigma_stable,
                      const ConstrainedAut* phi) {
  const FreeNilpotent& F = D.free();
  Echelon I = D.kernel_span();
  std::vector<FVec> queue = seeds;
  auto nonzero = [](const FVec& v) { return std::any_of(v.begin(), v.end(), [](uint32_t x) { return x != 0; }); };
  while (!queue.empty()) {
    FVec v = std::move(queue.back());
    queue.pop_back();
    if (!I.insert(v)) continue;
    bool low = false;  // a part below the top degree
    for (size_t i = 0; i < F.dim1() + (F.nil_class() == 3 ? F.dim2() : 0); ++i) low |= v[i] != 0;
    if (low)
      for (int j = 0; j < F.num_gens(); ++j) {
        FVec b = F.bracket(v, F.gen(j));
        if (nonzero(b)) queue.push_back(std::move(b));
      }
    if (sigma_stable) queue.push_back(D.sigma(v));
    if (phi) queue.push_back(phi->apply(D, v));
  }
  return I;
}

Echelon y_ideal(const DemushkinTrunc& D, const ConstrainedAut& phi) {
  const FreeNilpotent& F = D.free();
  std::vector<FVec> seeds;
  for (int i = 0; i < D.m(); ++i) seeds.push_back(D.reduce(F.mul(F.inv(F.gen(i)), phi.gen_images[i])));
  seeds.push_back(phi.t);
  seeds.push_back(D.xi());
  return ideal_closure(D, seeds, true, &phi);
}

Echelon z_ideal(const DemushkinTrunc& D, const ConstrainedAut& phi) {
  const FreeNilpotent& F = D.free();
  std::vector<FVec> seeds;
  for (int i = 0; i < D.n(); ++i) {
    seeds.push_back(F.gen(2 * i));
    seeds.push_back(phi.gen_images[2 * i]);
  }
  return ideal_closure(D, seeds, false, nullptr);
}

QuotientPresentation present_quotient(const FreeNilpotent& F, Echelon ideal) {
  QuotientPresentation P;
  const Fp& f = F.field();
  const int m = F.num_gens();
  P.log_order = F.dim() - ideal.rank();
  for (int i = 0; i < m; ++i)
    if (!ideal.is_pivot(i)) P.free_letters.push_back(static_cast<uint32_t>(i));
  // Lie monomials in the free letters span L / I.
  std::vector<FVec> mons;
  const auto& fl = P.free_letters;
  for (uint32_t a : fl) mons.push_back(F.gen(a));
  if (F.nil_class() >= 2)
    for (size_t x = 0; x < fl.size(); ++x)
      for (size_t y = x + 1; y < fl.size(); ++y) mons.push_back(F.bracket(F.gen(fl[x]), F.gen(fl[y])));
  if (F.nil_class() >= 3)
    for (size_t x = 0; x < fl.size(); ++x)
      for (size_t y = x + 1; y < fl.size(); ++y)
        for (uint32_t c : fl) mons.push_back(F.bracket(F.bracket(F.gen(fl[x]), F.gen(fl[y])), F.gen(c)));
  FMat A(F.dim(), mons.size());
  for (size_t k = 0; k < mons.size(); ++k) {
    FVec r = mons[k];
    ideal.reduce(r);
    A.set_col(k, r);
  }
  P.gen_words.resize(m);
  for (int i = 0; i < m; ++i) {
    if (!ideal.is_pivot(i)) {
      P.gen_words[i] = F.malcev(F.gen(i));
      continue;
    }
    FVec r = F.gen(i);
    ideal.reduce(r);
    AffineSolution sol;
    require(solve_affine(f, A, r, sol), Err::Internal, "quotient is not generated by the free letters");
    FVec w = F.zero();
    for (size_t k = 0; k < mons.size(); ++k)
      if (sol.particular[k]) f.axpy(w, sol.particular[k], mons[k]);
    P.gen_words[i] = F.malcev(w);
  }
  for (const auto& row : ideal.rows()) P.relations.push_back(F.malcev(row));
  P.ideal = std::move(ideal);
  return P;
}

void for_each_quotient_surjection(const FreeNilpotent& F, const QuotientPresentation& P, const FiniteGroup& H,
                                  const FrattiniQuotient& frat, const std::vector<std::vector<Elt>>& candidates,
                                  const std::function<bool(const std::vector<Elt>&)>& accept,
                                  const std::function<void(const std::vector<Elt>&)>& fn) {
  const size_t k = P.free_letters.size();
  require(candidates.size() == k, Err::InvalidArgument, "one candidate list per free letter");
  if (k < frat.dim) return;
  for (const auto& c : candidates)
    if (c.empty()) return;
  const int m = F.num_gens();
  const Fp field(F.ell());
  std::vector<size_t> pos(k, 0);
  std::vector<Elt> images(m, H.id());
  std::vector<int> is_free(m, 0);
  for (uint32_t a : P.free_letters) is_free[a] = 1;
  while (true) {
    for (size_t x = 0; x < k; ++x) images[P.free_letters[x]] = candidates[x][pos[x]];
    for (int i = 0; i < m; ++i)
      if (!is_free[i]) images[i] = F.eval_malcev(H, images, P.gen_words[i]);
    bool ok = !accept || accept(images);
    if (ok) {
      Echelon E(&field, frat.dim);
      for (int i = 0; i < m && E.rank() < frat.dim; ++i) E.insert(frat.coords[images[i]]);
      ok = E.rank() == frat.dim;
    }
    if (ok)
      for (const auto& rel : P.relations)
        if (F.eval_malcev(H, images, rel) != H.id()) {
          ok = false;
          break;
        }
    if (ok) fn(images);
    size_t x = 0;
    while (x < k && ++pos[x] == candidates[x].size()) pos[x++] = 0;
    if (x == k) break;
  }
}

// ---------------------------------------------------------------- per-sample counts

namespace {

size_t kernel_index(const TargetGroup& T, Elt v) {
  auto it = std::lower_bound(T.cover.kernel.begin(), T.cover.kernel.end(), v);
  require(it != T.cover.kernel.end() && *it == v, Err::Internal, "value outside the covering kernel");
  return static_cast<size_t>(it - T.cover.kernel.begin());
}

// Counts surjections rho with rho(sigma x) = u gamma(rho x) u^-1 on every generator.
void count_twisted(const DemushkinTrunc& D, const QuotientPresentation& P, const TargetGroup& T,
                   const std::vector<FreeNilpotent::Malcev>& sigma_words, Elt u,
                   const std::function<void(const std::vector<Elt>&)>& fn) {
  const FiniteGroup& H = *T.H.group;
  const FreeNilpotent& F = D.free();
  auto twisted = [&](Elt h) { return H.mul(H.mul(u, T.gamma_img[h]), H.inv(u)); };
  std::vector<Elt> allowed;
  for (Elt h = 0; h < H.order(); ++h)
    if (!D.sigma_is_standard() || twisted(h) == H.inv(h)) allowed.push_back(h);
  std::vector<std::vector<Elt>> cand(P.free_letters.size(), allowed);
  auto accept = [&](const std::vector<Elt>& im) {
    for (int j = 0; j < D.m(); ++j) {
      Elt lhs = D.sigma_is_standard() ? H.inv(im[j]) : F.eval_malcev(H, im, sigma_words[j]);
      if (lhs != twisted(im[j])) return false;
    }
    return true;
  };
  for_each_quotient_surjection(F, P, H, T.frattini, cand, accept, fn);
}

}  // namespace

YSampleCounts count_y_sample(const DemushkinTrunc& D, const ConstrainedAut& phi, const TargetGroup& T,
                             const DeltaTarget& delta, bool with_x) {
  require(T.has_cover(), Err::InvalidArgument, "target has no covering");
  YSampleCounts out;
  out.y_by_value.assign(T.cover.kernel.size(), 0);
  const FreeNilpotent& F = D.free();
  const FiniteGroup& H = *T.H.group;
  Echelon I = y_ideal(D, phi);
  const size_t free_count = static_cast<size_t>(D.m()) - std::count_if(I.pivots().begin(), I.pivots().end(),
                                                                        [&](size_t c) { return c < F.dim1(); });
  if (free_count < T.frattini.dim) return out;
  QuotientPresentation P = present_quotient(F, std::move(I));
  std::vector<FreeNilpotent::Malcev> sigma_words;
  if (!D.sigma_is_standard())
    for (int j = 0; j < D.m(); ++j) sigma_words.push_back(F.malcev(D.sigma(F.gen(j))));
  const Word& rel = D.relator();
  count_twisted(D, P, T, sigma_words, H.id(), [&](const std::vector<Elt>& im) {
    Elt v = pi_dagger(T, rel, im);
    ++out.y_sur;
    ++out.y_by_value[kernel_index(T, v)];
    if (v == delta.value) ++out.y_delta;
  });
  if (with_x)
    for (Elt u = 0; u < H.order(); ++u) {
      if (H.mul(u, T.gamma_img[u]) != H.id()) continue;
      count_twisted(D, P, T, sigma_words, u, [&](const std::vector<Elt>& im) {
        ++out.x_sur;
        if (pi_dagger(T, rel, im) == delta.value) ++out.x_delta;
      });
    }
  return out;
}

uint64_t count_z_sample(const DemushkinTrunc& D, const ConstrainedAut& phi, const TargetGroup& T) {
  const FreeNilpotent& F = D.free();
  const FiniteGroup& H = *T.H.group;
  Echelon I = z_ideal(D, phi);
  size_t free_count = 0;
  for (int i = 0; i < D.m(); ++i) free_count += I.is_pivot(i) ? 0 : 1;
  if (free_count < T.frattini.dim) return 0;
  QuotientPresentation P = present_quotient(F, std::move(I));
  std::vector<Elt> all(H.order());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<Elt>> cand(P.free_letters.size(), all);
  uint64_t c = 0;
  for_each_quotient_surjection(F, P, H, T.frattini, cand, nullptr, [&](const std::vector<Elt>&) { ++c; });
  return c;
}

uint64_t matrix_count(const DemushkinTrunc& D, const ConstrainedAut& phi, int r, bool zero_pairing) {
  require(r == 1 || r == 2, Err::InvalidArgument, "matrix count supports r = 1, 2");
  const Fp& f = D.field();
  const int m = D.m();
  FMat A(m + 1, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) A(i, k) = f.sub(phi.T(k, i), k == i ? 1 : 0);
  for (int k = 0; k < m; ++k) A(m, k) = phi.t[k];
  AffineSolution sol;
  solve_affine(f, A, FVec(m + 1, 0), sol);
  const int64_t l = f.p;
  const int k = static_cast<int>(sol.kernel.size());
  auto lp = [&](int e) {
    int64_t x = 1;
    for (int i = 0; i < e; ++i) x *= l;
    return x;
  };
  if (r == 1) return static_cast<uint64_t>(lp(k) - 1);
  if (!zero_pairing) return static_cast<uint64_t>((lp(k) - 1) * (lp(k) - l));
  if (k < 2) return 0;
  FMat G(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) G(i, j) = beta(f, D.form(), sol.kernel[i], sol.kernel[j]);
  const int rad = k - static_cast<int>(mat_rank(f, G));
  int64_t c = (lp(rad) - 1) * (lp(k) - l) + (lp(k) - lp(rad)) * (lp(k - 1) - l);
  return static_cast<uint64_t>(c);
}

// ---------------------------------------------------------------- explicit tables

FixedQuotientTables build_fixed_quotient(const DemushkinTrunc& D, const ConstrainedAut& phi) {
  const FreeNilpotent& F = D.free();
  const uint32_t l = F.ell();
  const size_t lg = D.gtilde_log_order();
  uint64_t N = 1;
  for (size_t i = 0; i < lg; ++i) {
    N *= l;
    require(2 * N <= kTableCap, Err::CapExceeded, "gtilde x| Gamma exceeds the table cap");
  }
  std::vector<size_t> cols = D.kernel_span().free_columns();
  FixedQuotientTables out;
  out.gtilde_elems.resize(N);
  auto encode = [&](const FVec& v) {
    uint64_t c = 0;
    for (size_t i = cols.size(); i-- > 0;) c = c * l + v[cols[i]];
    return static_cast<Elt>(c);
  };
  for (uint64_t c = 0; c < N; ++c) {
    FVec v = F.zero();
    uint64_t x = c;
    for (size_t col : cols) {
      v[col] = static_cast<uint32_t>(x % l);
      x /= l;
    }
    out.gtilde_elems[c] = v;
  }
  const uint32_t n2 = static_cast<uint32_t>(2 * N);
  std::vector<Elt> sig(N), ph(N);
  for (uint64_t a = 0; a < N; ++a) {
    sig[a] = encode(D.sigma(out.gtilde_elems[a]));
    ph[a] = encode(phi.apply(D, out.gtilde_elems[a]));
  }
  std::vector<Elt> mulg(N * N);
  for (uint64_t a = 0; a < N; ++a)
    for (uint64_t b = 0; b < N; ++b) mulg[a * N + b] = encode(D.mul(out.gtilde_elems[a], out.gtilde_elems[b]));
  std::vector<Elt> flat(static_cast<size_t>(n2) * n2);
  for (uint32_t x = 0; x < n2; ++x)
    for (uint32_t y = 0; y < n2; ++y) {
      uint64_t a = x % N, e = x / N, b = y % N, e2 = y / N;
      uint64_t b2 = e ? sig[b] : b;
      flat[static_cast<size_t>(x) * n2 + y] = static_cast<Elt>(mulg[a * N + b2] + N * ((e + e2) % 2));
    }
  out.ambient = make_group(FiniteGroup::from_flat(n2, std::move(flat), 0, false));
  const FiniteGroup& A = *out.ambient;
  const Elt s = static_cast<Elt>(N);
  const Elt t = encode(phi.t);
  std::vector<Elt> phimap(n2);
  for (uint32_t x = 0; x < n2; ++x) phimap[x] = x < N ? ph[x] : A.mul(ph[x - N], A.mul(t, s));
  std::vector<Elt> seeds;
  for (uint32_t x = 0; x < n2; ++x) seeds.push_back(A.mul(A.inv(x), phimap[x]));
  seeds.push_back(encode(D.xi()));
  Subgroup Nsub = normal_closure(A, seeds);
  while (true) {
    std::vector<Elt> more = Nsub;
    for (Elt x : Nsub) more.push_back(phimap[x]);
    Subgroup next = normal_closure(A, more);
    if (next == Nsub) break;
    Nsub = next;
  }
  QuotientResult q = quotient(out.ambient, Nsub);
  out.X = q.group;
  out.proj = q.proj;
  const FiniteGroup& X = *out.X;
  std::vector<Elt> ymem;
  for (uint64_t a = 0; a < N; ++a) ymem.push_back(q.proj(static_cast<Elt>(a)));
  std::sort(ymem.begin(), ymem.end());
  ymem.erase(std::unique(ymem.begin(), ymem.end()), ymem.end());
  const uint32_t ny = static_cast<uint32_t>(ymem.size());
  auto yidx = [&](Elt x) {
    return static_cast<Elt>(std::lower_bound(ymem.begin(), ymem.end(), x) - ymem.begin());
  };
  std::vector<Elt> yflat(static_cast<size_t>(ny) * ny);
  for (uint32_t i = 0; i < ny; ++i)
    for (uint32_t j = 0; j < ny; ++j) yflat[static_cast<size_t>(i) * ny + j] = yidx(X.mul(ymem[i], ymem[j]));
  GroupPtr Y = make_group(FiniteGroup::from_flat(ny, std::move(yflat), yidx(X.id()), true));
  const Elt sx = q.proj(s);
  std::vector<Elt> action(2 * static_cast<size_t>(ny));
  for (uint32_t i = 0; i < ny; ++i) {
    action[i] = i;
    action[ny + i] = yidx(X.conj(ymem[i], sx));
  }
  out.Y = GammaGroup::make(Y, cyclic_group(2), std::move(action));
  return out;
}

// ---------------------------------------------------------------- orbit checks

namespace {

struct UnionFind {
  std::vector<size_t> p;
  explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  size_t find(size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(size_t a, size_t b) { p[find(a)] = find(b); }
};

// Gamma-equivariant surjections g -> H as generator image tuples.
std::vector<std::vector<Elt>> equivariant_surjections_g(const DemushkinTrunc& D, const TargetGroup& T) {
  Echelon I = D.kernel_span();
  I.insert(D.xi());
  QuotientPresentation P = present_quotient(D.free(), std::move(I));
  std::vector<std::vector<Elt>> out;
  count_twisted(D, P, T, {}, T.H.group->id(), [&](const std::vector<Elt>& im) { out.push_back(im); });
  return out;
}

}  // namespace

OrbitReport orbit_check_exhaustive(uint32_t ell, int64_t q, const GammaGroup& H) {
  DemushkinTrunc D(1, ell, 2, RelatorKind::AllInverses);
  const FreeNilpotent& F = D.free();
  const Fp& f = D.field();
  const FiniteGroup& Hg = *H.group;
  TargetGroup T = make_target(H, ell, 2);
  auto surs = equivariant_surjections_g(D, T);
  OrbitReport rep;
  rep.surjections = surs.size();
  std::map<std::vector<Elt>, size_t> index;
  std::vector<Elt> inv(surs.size());
  std::map<Elt, int> classes;
  for (size_t i = 0; i < surs.size(); ++i) {
    index[surs[i]] = i;
    inv[i] = pi_dagger(T, D.relator(), surs[i]);
    classes[inv[i]] = 1;
  }
  rep.invariant_classes = classes.size();
  UnionFind uf(surs.size());
  const uint32_t qq = f.red(q);
  auto Ms = enumerate_similitudes(f, D.form(), qq);
  uint64_t total = 1;
  for (size_t i = 0; i < F.dim(); ++i) total *= ell;
  for (const auto& M : Ms)
    for (uint64_t c = 0; c < total; ++c) {
      FVec u = F.zero();
      uint64_t x = c;
      for (auto& e : u) {
        e = static_cast<uint32_t>(x % ell);
        x /= ell;
      }
      ConstrainedAut a = gamma_aut_from_params(D, qq, M, {}, u);
      verify_aut(D, a, true);
      ++rep.automorphisms;
      for (size_t i = 0; i < surs.size(); ++i) {
        if (F.eval_in(Hg, surs[i], a.t) != Hg.id()) continue;
        std::vector<Elt> im(D.m());
        for (int j = 0; j < D.m(); ++j) im[j] = F.eval_in(Hg, surs[i], a.gen_images[j]);
        ++rep.pairs_checked;
        auto it = index.find(im);
        if (it == index.end()) {
          ++rep.witness_failures;
          continue;
        }
        uf.unite(i, it->second);
      }
    }
  std::map<size_t, int> roots;
  for (size_t i = 0; i < surs.size(); ++i) roots[uf.find(i)] = 1;
  rep.orbits = roots.size();
  rep.transitive = rep.witness_failures == 0 && rep.orbits == rep.invariant_classes;
  return rep;
}

OrbitReport orbit_check_witness(int n, uint32_t ell, int64_t q, const GammaGroup& H, int pairs, uint64_t seed) {
  const FiniteGroup& Hg = *H.group;
  require(Hg.is_abelian() && Hg.exponent() == ell, Err::InvalidArgument,
          "witness construction needs an elementary abelian target");
  DemushkinTrunc D(n, ell, 2, RelatorKind::AllInverses);
  const FreeNilpotent& F = D.free();
  const Fp& f = D.field();
  TargetGroup T = make_target(H, ell, 2);
  for (Elt h = 0; h < Hg.order(); ++h)
    require(T.gamma_img[h] == Hg.inv(h), Err::InvalidArgument, "witness construction needs the inversion action");
  const uint32_t r = T.frattini.dim;
  const uint32_t qq = f.red(q);
  const int m = D.m();
  std::mt19937_64 rng(seed);
  auto random_sur = [&]() {
    while (true) {
      std::vector<Elt> im(m);
      for (auto& x : im) x = static_cast<Elt>(rng() % Hg.order());
      Echelon E(&f, r);
      for (Elt x : im) E.insert(T.frattini.coords[x]);
      if (E.rank() == r) return im;
    }
  };
  auto vectors = [&](const std::vector<Elt>& im) {
    std::vector<FVec> vs(r, FVec(m, 0));
    for (int i = 0; i < m; ++i)
      for (uint32_t k = 0; k < r; ++k) vs[k][i] = T.frattini.coords[im[i]][k];
    return vs;
  };
  auto gram = [&](const std::vector<FVec>& vs) {
    FMat G(r, r);
    for (uint32_t a = 0; a < r; ++a)
      for (uint32_t b = 0; b < r; ++b) G(a, b) = beta(f, D.form(), vs[a], vs[b]);
    return G;
  };
  const FiniteGroup& S = *T.cover.total;
  OrbitReport rep;
  rep.invariant_classes = 0;
  for (int p = 0; p < pairs; ++p) {
    std::vector<Elt> r2 = random_sur();
    Elt target = S.pow(pi_dagger(T, D.relator(), r2), q);
    std::vector<Elt> r1;
    for (int tries = 0;; ++tries) {
      require(tries < 100000, Err::WitnessSearchFailed, "no surjection with the required invariant");
      r1 = random_sur();
      if (pi_dagger(T, D.relator(), r1) == target) break;
    }
    ++rep.pairs_checked;
    try {
      auto v1 = vectors(r1), v2 = vectors(r2);
      FMat B1 = q_symplectic_completion(f, D.form(), v1, gram(v1), qq);
      FMat B2 = q_symplectic_completion(f, D.form(), v2, gram(v2), 1);
      FMat B2i;
      require(mat_inverse(f, B2, B2i), Err::Internal, "completion is singular");
      FMat M = mat_mul(f, B1, B2i);
      ConstrainedAut a = gamma_aut_from_params(D, qq, M, {}, F.zero());
      verify_aut(D, a, true);
      bool ok = F.eval_in(Hg, r2, a.t) == Hg.id();
      for (int j = 0; j < m && ok; ++j) ok = F.eval_in(Hg, r2, a.gen_images[j]) == r1[j];
      if (!ok) ++rep.witness_failures;
    } catch (const Error&) {
      ++rep.witness_failures;
    }
  }
  rep.transitive = rep.witness_failures == 0;
  return rep;
}

// ---------------------------------------------------------------- moment estimators

namespace {

MomentEstimate to_estimate(const StatAccum& a, uint64_t seed) {
  MomentEstimate e;
  e.mean = a.mean();
  e.stderr_ = a.stderr_();
  e.samples = a.n;
  e.seed = seed;
  e.all_zero = a.all_zero();
  return e;
}

MomentEstimate with_target(MomentEstimate e, double target) {
  e.target = target;
  e.has_target = true;
  return e;
}

}  // namespace

double MomentEstimate::sigmas_off() const {
  if (!has_target) return 0;
  double d = std::abs(mean - target);
  if (stderr_ > 0) return d / stderr_;
  return d < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

YMomentReport estimate_moment_y(const YMomentConfig& cfg) {
  require(cfg.q % static_cast<int64_t>(cfg.ell) != 0, Err::QNotCoprime, "q must be prime to l");
  DemushkinTrunc D(cfg.n, cfg.ell, cfg.cls, RelatorKind::AllInverses);
  if (cfg.sigma_conjugate) {
    std::mt19937_64 r(cfg.sigma_seed);
    D.set_sigma_conjugate(sample_plain_aut(D, r).psi);
  }
  TargetGroup T = make_target(cfg.H, cfg.ell, cfg.cls);
  DeltaTarget delta = make_delta(T, cfg.delta);
  const FiniteGroup& Hg = *cfg.H.group;
  const FiniteGroup& S = *T.cover.total;
  YMomentReport rep;
  rep.fixed_index = T.fixed_index;
  rep.delta_order = delta.order;
  auto divides_qm1 = [&](uint64_t o) { return o == 1 || (cfg.q - 1) % static_cast<int64_t>(o) == 0; };
  rep.delta_order_violation = !divides_qm1(delta.order);
  rep.admissible_deltas = 0;
  for (Elt k : T.cover.kernel) rep.admissible_deltas += divides_qm1(S.elem_order(k)) ? 1 : 0;
  const uint32_t r = T.frattini.dim;
  bool inversion = true;
  for (Elt h = 0; h < Hg.order(); ++h) inversion &= T.gamma_img[h] == Hg.inv(h);
  rep.has_matrix = Hg.is_abelian() && Hg.exponent() == cfg.ell && (r == 1 || r == 2) && inversion &&
                   delta.value == S.id() && cfg.cls == 2;
  const int64_t idx = static_cast<int64_t>(T.fixed_index);
  const uint32_t q = static_cast<uint32_t>(((cfg.q % cfg.ell) + cfg.ell) % cfg.ell);
  // statistics: y_delta, x_delta, y_total, x_total, x - idx y, matrix, matrix - group, surjective
  auto acc = run_blocks(cfg.samples, cfg.seed, cfg.threads, 8, [&](std::mt19937_64& rng, std::vector<int64_t>& v) {
    ConstrainedAut a = sample_constrained_aut(D, q, rng);
    YSampleCounts c = count_y_sample(D, a, T, delta, true);
    v[0] = static_cast<int64_t>(c.y_delta);
    v[1] = static_cast<int64_t>(c.x_delta);
    v[2] = static_cast<int64_t>(c.y_sur);
    v[3] = static_cast<int64_t>(c.x_sur);
    v[4] = static_cast<int64_t>(c.x_sur) - idx * static_cast<int64_t>(c.y_sur);
    if (rep.has_matrix) {
      int64_t mc = static_cast<int64_t>(matrix_count(D, a, static_cast<int>(r), r == 2));
      v[5] = mc;
      v[6] = mc - static_cast<int64_t>(c.y_delta);
    }
    v[7] = c.y_sur > 0 ? 1 : 0;
  });
  const double ty = rep.delta_order_violation ? 0.0 : 1.0 / static_cast<double>(idx);
  rep.y_delta = with_target(to_estimate(acc[0], cfg.seed), ty);
  rep.x_delta = with_target(to_estimate(acc[1], cfg.seed), rep.delta_order_violation ? 0.0 : 1.0);
  rep.y_total = with_target(to_estimate(acc[2], cfg.seed), static_cast<double>(rep.admissible_deltas) / idx);
  rep.x_total = with_target(to_estimate(acc[3], cfg.seed), static_cast<double>(rep.admissible_deltas));
  rep.x_minus_index_y = with_target(to_estimate(acc[4], cfg.seed), 0.0);
  if (rep.has_matrix) {
    rep.matrix = with_target(to_estimate(acc[5], cfg.seed), ty);
    rep.matrix_minus_group = with_target(to_estimate(acc[6], cfg.seed), 0.0);
  }
  rep.surjection_fraction = acc[7].mean();
  return rep;
}

uint64_t z_moment_target(GroupPtr H, uint32_t ell) {
  return static_cast<uint64_t>(commutator_subgroup(*H).size()) * schur_multiplier_l(H, ell).order();
}

std::vector<MomentEstimate> estimate_moment_z(const ZMomentConfig& cfg) {
  DemushkinTrunc D(cfg.n, cfg.ell, cfg.cls, RelatorKind::Standard);
  std::vector<TargetGroup> Ts;
  for (const auto& H : cfg.targets) Ts.push_back(make_plain_target(H, cfg.ell, cfg.cls));
  const size_t k = Ts.size();
  auto acc = run_blocks(cfg.samples, cfg.seed, cfg.threads, k, [&](std::mt19937_64& rng, std::vector<int64_t>& v) {
    ConstrainedAut a = sample_plain_aut(D, rng);
    for (size_t i = 0; i < k; ++i) v[i] = static_cast<int64_t>(count_z_sample(D, a, Ts[i]));
  });
  std::vector<MomentEstimate> out;
  for (size_t i = 0; i < k; ++i)
    out.push_back(with_target(to_estimate(acc[i], cfg.seed), static_cast<double>(z_moment_target(cfg.targets[i], cfg.ell))));
  return out;
}

}  // namespace cll
