#include "cll/cohomology.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <random>

namespace cll {

// ---------------------------------------------------------------- cocycles

bool Cocycle2::is_normalized() const {
  const FiniteGroup& G = *group;
  for (Elt x = 0; x < G.order(); ++x)
    if (at(x, G.id()) != 0 || at(G.id(), x) != 0) return false;
  return true;
}

bool Cocycle2::is_cocycle() const {
  const FiniteGroup& G = *group;
  const uint64_t M = modulus;
  for (Elt x = 0; x < G.order(); ++x)
    for (Elt y = 0; y < G.order(); ++y) {
      const uint64_t axy = at(x, y);
      const Elt xy = G.mul(x, y);
      for (Elt z = 0; z < G.order(); ++z) {
        uint64_t lhs = (axy + at(xy, z)) % M;
        uint64_t rhs = (at(y, z) + at(x, G.mul(y, z))) % M;
        if (lhs != rhs) return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------- presentation data

HopfData::HopfData(GroupPtr G, std::vector<Elt> gens, Tree tree) : G_(std::move(G)), S_(std::move(gens)) {
  if (S_.empty()) S_ = G_->gens();
  const FiniteGroup& g = *G_;
  require(generates(g, S_) || g.order() == 1, Err::NotGenerating, "presentation generators do not generate");
  const size_t n = g.order(), k = S_.size();
  col_.assign(n * k, -1);
  word_.assign(n, {});
  parent_.assign(n, g.id());
  parent_gen_.assign(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<char> is_tree(n * k, 0);
  seen[g.id()] = 1;
  order_.push_back(g.id());
  if (tree == Tree::BFS) {
    for (size_t qi = 0; qi < order_.size(); ++qi) {
      Elt x = order_[qi];
      for (size_t j = 0; j < k; ++j) {
        Elt y = g.mul(x, S_[j]);
        if (!seen[y]) {
          seen[y] = 1;
          is_tree[x * k + j] = 1;
          parent_[y] = x;
          parent_gen_[y] = static_cast<uint32_t>(j);
          word_[y] = word_[x];
          word_[y].push_back(static_cast<uint32_t>(j));
          order_.push_back(y);
        }
      }
    }
  } else {
    std::vector<std::pair<Elt, size_t>> stack{{g.id(), 0}};
    while (!stack.empty()) {
      auto& [x, j] = stack.back();
      if (j == k) {
        stack.pop_back();
        continue;
      }
      Elt y = g.mul(x, S_[j]);
      size_t jj = j++;
      if (!seen[y]) {
        seen[y] = 1;
        is_tree[x * k + jj] = 1;
        parent_[y] = x;
        parent_gen_[y] = static_cast<uint32_t>(jj);
        word_[y] = word_[x];
        word_[y].push_back(static_cast<uint32_t>(jj));
        order_.push_back(y);
        stack.push_back({y, 0});
      }
    }
  }
  E_ = 0;
  for (size_t x = 0; x < n; ++x)
    for (size_t j = 0; j < k; ++j)
      if (!is_tree[x * k + j]) col_[x * k + j] = static_cast<int64_t>(E_++);
}

Mat HopfData::relation_matrix(const ZMod& R) const {
  const FiniteGroup& g = *G_;
  const size_t n = g.order(), k = S_.size();
  Mat M(k * E_, E_);
  std::vector<int64_t> row(E_);
  size_t r = 0;
  for (size_t t = 0; t < k; ++t)
    for (Elt x = 0; x < n; ++x)
      for (size_t j = 0; j < k; ++j) {
        int64_t e = col_[x * k + j];
        if (e < 0) continue;
        std::fill(row.begin(), row.end(), 0);
        Elt v = S_[t];
        for (uint32_t w : word_[x]) {
          int64_t c = col_[static_cast<size_t>(v) * k + w];
          if (c >= 0) row[c] += 1;
          v = g.mul(v, S_[w]);
        }
        int64_t c = col_[static_cast<size_t>(v) * k + j];
        if (c >= 0) row[c] += 1;
        Elt xs = g.mul(x, S_[j]);
        v = S_[t];
        for (uint32_t w : word_[xs]) {
          int64_t c2 = col_[static_cast<size_t>(v) * k + w];
          if (c2 >= 0) row[c2] -= 1;
          v = g.mul(v, S_[w]);
        }
        row[e] -= 1;
        for (size_t i = 0; i < E_; ++i) M(r, i) = R.red(row[i]);
        ++r;
      }
  return M;
}

std::vector<std::vector<int64_t>> HopfData::coboundary_functionals() const {
  const FiniteGroup& g = *G_;
  const size_t n = g.order(), k = S_.size();
  std::vector<std::vector<int64_t>> b(k, std::vector<int64_t>(E_, 0));
  for (Elt x = 0; x < n; ++x)
    for (size_t j = 0; j < k; ++j) {
      int64_t e = col_[x * k + j];
      if (e < 0) continue;
      Elt xs = g.mul(x, S_[j]);
      for (uint32_t w : word_[x]) b[w][e] += 1;
      b[j][e] += 1;
      for (uint32_t w : word_[xs]) b[w][e] -= 1;
    }
  return b;
}

Mat HopfData::exponent_sum_matrix(const ZMod& R) const {
  auto b = coboundary_functionals();
  Mat M(S_.size(), E_);
  for (size_t s = 0; s < S_.size(); ++s)
    for (size_t e = 0; e < E_; ++e) M(s, e) = R.red(b[s][e]);
  return M;
}

Cocycle2 HopfData::cocycle_from_functional(const std::vector<uint64_t>& f, uint64_t modulus) const {
  const FiniteGroup& g = *G_;
  const size_t n = g.order(), k = S_.size();
  Cocycle2 c{G_, modulus, std::vector<uint64_t>(n * n, 0)};
  auto u = [&](Elt v, size_t j) -> uint64_t {
    int64_t e = col_[static_cast<size_t>(v) * k + j];
    return e < 0 ? 0 : f[e] % modulus;
  };
  for (Elt x = 0; x < n; ++x)
    for (size_t oi = 1; oi < order_.size(); ++oi) {
      Elt y = order_[oi];
      Elt p = parent_[y];
      c.values[x * n + y] = (c.values[x * n + p] + u(g.mul(x, p), parent_gen_[y])) % modulus;
    }
  return c;
}

std::vector<uint64_t> HopfData::functional_from_cocycle(const Cocycle2& c) const {
  const FiniteGroup& g = *G_;
  const size_t n = g.order(), k = S_.size();
  const uint64_t M = c.modulus;
  std::vector<uint64_t> tau(n, 0);
  for (size_t oi = 1; oi < order_.size(); ++oi) {
    Elt y = order_[oi];
    Elt p = parent_[y];
    tau[y] = (tau[p] + c.at(p, S_[parent_gen_[y]])) % M;
  }
  std::vector<uint64_t> f(E_, 0);
  for (Elt x = 0; x < n; ++x)
    for (size_t j = 0; j < k; ++j) {
      int64_t e = col_[x * k + j];
      if (e < 0) continue;
      Elt xs = g.mul(x, S_[j]);
      f[e] = (tau[x] + c.at(x, S_[j]) + M - tau[xs]) % M;
    }
  return f;
}

// ---------------------------------------------------------------- H^2

std::vector<uint64_t> H2Data::class_coords(const std::vector<uint64_t>& f) const {
  // Coordinates in the kernel basis first.
  const size_t E = f.size();
  std::vector<uint64_t> y(E, 0);
  for (size_t i = 0; i < E; ++i) {
    uint64_t acc = 0;
    for (size_t j = 0; j < E; ++j)
      if (f[j]) acc = R.add(acc, R.mul(zsnf.Qinv(i, j), f[j] % R.N));
    y[i] = acc;
  }
  std::vector<uint64_t> zc(zbasis.size());
  for (size_t t = 0; t < zbasis.size(); ++t) {
    size_t i = zpos[t];
    if (i < zsnf.rank) {
      uint64_t scale = R.ppow(R.k - zsnf.vals[i]);
      require(y[i] % scale == 0, Err::InvalidArgument, "functional is not G-invariant");
      zc[t] = (y[i] / scale) % zorders[t];
    } else {
      zc[t] = y[i];
    }
  }
  for (size_t i = 0; i < zsnf.rank; ++i) {
    if (zsnf.vals[i] == 0) require(y[i] == 0, Err::InvalidArgument, "functional is not G-invariant");
  }
  return quot.coords(zc);
}

std::vector<uint64_t> H2Data::functional_of(const std::vector<uint64_t>& coords) const {
  std::vector<uint64_t> f(hopf->num_edges(), 0);
  for (size_t b = 0; b < basis.size(); ++b) {
    uint64_t c = coords[b] % orders[b];
    if (!c) continue;
    for (size_t e = 0; e < f.size(); ++e) f[e] = R.add(f[e], R.mul(c, basis[b][e]));
  }
  return f;
}

H2Data compute_h2(std::shared_ptr<const HopfData> hopf, const ZMod& R) {
  H2Data d;
  d.R = R;
  d.hopf = hopf;
  const size_t E = hopf->num_edges();
  if (E == 0) {
    d.structure = AbelianStructure{};
    return d;
  }
  Mat rel = hopf->relation_matrix(R);
  d.zsnf = smith_normal_form(rel, R, false, true);
  for (size_t i = 0; i < E; ++i) {
    int v = i < d.zsnf.vals.size() ? d.zsnf.vals[i] : R.k;
    if (i < d.zsnf.rank && v == 0) continue;
    uint64_t scale = (i < d.zsnf.rank) ? R.ppow(R.k - v) : 1;
    uint64_t order = (i < d.zsnf.rank) ? R.ppow(v) : R.N;
    std::vector<uint64_t> g(E);
    for (size_t r = 0; r < E; ++r) g[r] = R.mul(scale, d.zsnf.Q(r, i));
    d.zbasis.push_back(std::move(g));
    d.zorders.push_back(order);
    d.zpos.push_back(i);
  }
  const size_t t = d.zbasis.size();
  auto zcoords = [&](const std::vector<uint64_t>& f) {
    std::vector<uint64_t> zc(t);
    for (size_t a = 0; a < t; ++a) {
      size_t i = d.zpos[a];
      uint64_t acc = 0;
      for (size_t j = 0; j < E; ++j)
        if (f[j]) acc = R.add(acc, R.mul(d.zsnf.Qinv(i, j), f[j]));
      if (i < d.zsnf.rank) {
        uint64_t scale = R.ppow(R.k - d.zsnf.vals[i]);
        require(acc % scale == 0, Err::Internal, "coboundary functional not in kernel");
        zc[a] = (acc / scale) % d.zorders[a];
      } else {
        zc[a] = acc;
      }
    }
    return zc;
  };
  std::vector<std::vector<uint64_t>> rows;
  for (size_t a = 0; a < t; ++a)
    if (d.zorders[a] != R.N) {
      std::vector<uint64_t> r(t, 0);
      r[a] = d.zorders[a] % R.N;
      rows.push_back(r);
    }
  for (auto& b : hopf->coboundary_functionals()) {
    std::vector<uint64_t> bf(E);
    for (size_t e = 0; e < E; ++e) bf[e] = R.red(b[e]);
    rows.push_back(zcoords(bf));
  }
  Mat rm(rows.size(), t);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < t; ++j) rm(i, j) = rows[i][j];
  d.quot = quotient_module(rm, t, R);
  for (size_t f = 0; f < d.quot.orders.size(); ++f) {
    std::vector<uint64_t> coeff = d.quot.basis_vector(f);
    std::vector<uint64_t> func(E, 0);
    for (size_t a = 0; a < t; ++a) {
      uint64_t c = coeff[a] % R.N;
      if (!c) continue;
      for (size_t e = 0; e < E; ++e) func[e] = R.add(func[e], R.mul(c, d.zbasis[a][e]));
    }
    d.basis.push_back(std::move(func));
    d.orders.push_back(d.quot.orders[f]);
  }
  d.structure = normalize_factors(d.orders);
  return d;
}

int design_exponent(const FiniteGroup& G, uint64_t ell) {
  const uint64_t target = static_cast<uint64_t>(G.exponent()) * G.order();
  int N = 1;
  uint64_t v = ell;
  while (v < target) {
    v *= ell;
    ++N;
  }
  return N;
}

H2Result h2(GroupPtr G, uint64_t ell, int exp) {
  require(G->order() <= 128, Err::CapExceeded, "h2 is capped at |G| <= 128");
  auto hopf = std::make_shared<const HopfData>(G, G->gens());
  ZMod R(ell, exp);
  H2Data d = compute_h2(hopf, R);
  H2Result r;
  r.modulus = R.N;
  r.structure = d.structure;
  for (auto& f : d.basis) r.basis.push_back(hopf->cocycle_from_functional(f, R.N));
  return r;
}

AbelianStructure abelianization_part(GroupPtr G, uint64_t ell) {
  QuotientResult q = quotient(G, commutator_subgroup(*G));
  Subgroup all(q.group->order());
  std::iota(all.begin(), all.end(), 0);
  AbelianSubgroupData d = abelian_subgroup_structure(*q.group, all);
  std::vector<uint64_t> f;
  for (uint64_t x : d.structure.factors)
    if (x % ell == 0) f.push_back(x);
  return normalize_factors(f);
}

AbelianStructure schur_multiplier_l(GroupPtr G, uint64_t ell) {
  if (G->order() % ell != 0) return AbelianStructure{};
  require(G->order() <= 128, Err::CapExceeded, "h2 is capped at |G| <= 128");
  const int N = design_exponent(*G, ell);
  auto hopf = std::make_shared<const HopfData>(G, G->gens());
  H2Data d = compute_h2(hopf, ZMod(ell, N));
  std::vector<uint64_t> fac = d.structure.factors;
  for (uint64_t x : abelianization_part(G, ell).factors) {
    auto it = std::find(fac.begin(), fac.end(), x);
    require(it != fac.end(), Err::Internal, "Ext part missing from H^2");
    fac.erase(it);
  }
  return normalize_factors(fac);
}

// ---------------------------------------------------------------- extensions

CentralExtension make_central_extension(GroupPtr total, GroupPtr base, std::vector<Elt> proj_map) {
  CentralExtension ext;
  ext.total = total;
  ext.base = base;
  ext.proj = GroupHom::make(total, base, std::move(proj_map));
  require(ext.proj.surjective(), Err::InvalidArgument, "extension projection is not surjective");
  ext.kernel = ext.proj.kernel();
  ext.fibers.assign(base->order(), {});
  for (Elt x = 0; x < total->order(); ++x) ext.fibers[ext.proj(x)].push_back(x);
  bool central = true;
  for (Elt k : ext.kernel)
    for (Elt g : total->gens())
      if (total->mul(k, g) != total->mul(g, k)) central = false;
  ext.central_verified = central;
  if (central) {
    Subgroup comm = commutator_subgroup(*total);
    ext.stem_verified = std::includes(comm.begin(), comm.end(), ext.kernel.begin(), ext.kernel.end());
    ext.kernel_data = abelian_subgroup_structure(*total, ext.kernel);
  }
  return ext;
}

CentralExtension extension_from_cocycles(GroupPtr G, const std::vector<Cocycle2>& comps) {
  const uint32_t n = G->order();
  uint64_t asz = 1;
  for (auto& c : comps) {
    require(c.group->order() == n, Err::InvalidArgument, "cocycle group mismatch");
    require(c.is_normalized(), Err::NotCocycle, "cocycle is not normalized");
    require(c.is_cocycle(), Err::NotCocycle, "cocycle identity fails");
    asz *= c.modulus;
  }
  const uint64_t tot = asz * n;
  require(tot <= kTableCap, Err::CapExceeded, "extension exceeds table cap");
  std::vector<uint64_t> radix;
  for (auto& c : comps) radix.push_back(c.modulus);
  auto digits = [&](uint64_t a) {
    std::vector<uint64_t> d(radix.size());
    for (size_t i = 0; i < radix.size(); ++i) {
      d[i] = a % radix[i];
      a /= radix[i];
    }
    return d;
  };
  std::vector<Elt> flat(tot * tot);
  for (uint64_t u = 0; u < tot; ++u) {
    auto da = digits(u % asz);
    Elt x = static_cast<Elt>(u / asz);
    for (uint64_t v = 0; v < tot; ++v) {
      auto db = digits(v % asz);
      Elt y = static_cast<Elt>(v / asz);
      uint64_t a = 0, mulr = 1;
      for (size_t i = 0; i < radix.size(); ++i) {
        uint64_t s = (da[i] + db[i] + comps[i].at(x, y)) % radix[i];
        a += s * mulr;
        mulr *= radix[i];
      }
      flat[u * tot + v] = static_cast<Elt>(a + asz * G->mul(x, y));
    }
  }
  GroupPtr T = make_group(FiniteGroup::from_flat(static_cast<uint32_t>(tot), std::move(flat),
                                                  static_cast<Elt>(asz * G->id()), true));
  std::vector<Elt> pm(tot);
  for (uint64_t u = 0; u < tot; ++u) pm[u] = static_cast<Elt>(u / asz);
  CentralExtension ext = make_central_extension(T, G, std::move(pm));
  ext.cocycles = comps;
  uint64_t h = 1469598103934665603ULL;
  for (auto& c : comps)
    for (uint64_t v : c.values) {
      h ^= v;
      h *= 1099511628211ULL;
    }
  ext.cocycle_hash = h;
  return ext;
}

CentralExtension extension_from_cocycle(GroupPtr G, const Cocycle2& alpha) {
  return extension_from_cocycles(G, {alpha});
}

namespace {

std::mutex g_cache_mu;
std::map<std::pair<uint64_t, uint64_t>, std::vector<Cocycle2>> g_class_cache;

// Cocycle components (one per factor of H_2(G)(l)) of a stem extension with kernel H_2(G)(l).
std::vector<Cocycle2> l_cover_cocycles(GroupPtr G, uint64_t ell) {
  {
    std::lock_guard<std::mutex> lk(g_cache_mu);
    auto it = g_class_cache.find({G->hash(), ell});
    if (it != g_class_cache.end()) return it->second;
  }
  std::vector<Cocycle2> result;
  AbelianStructure A = schur_multiplier_l(G, ell);
  if (!A.factors.empty()) {
    const int Nexp = design_exponent(*G, ell);
    ZMod RN(ell, Nexp);
    auto hopf = std::make_shared<const HopfData>(G, G->gens());
    KernelGens kg = kernel_mod(hopf->exponent_sum_matrix(RN), RN);
    const size_t K = kg.gens.size();
    const size_t r = A.factors.size();
    std::map<uint64_t, H2Data> h2s;
    for (uint64_t f : A.factors)
      if (!h2s.count(f)) h2s.emplace(f, compute_h2(hopf, ZMod::from_modulus(ell, f)));
    // Values of each H^2 basis class on the kernel generators.
    std::map<uint64_t, std::vector<std::vector<uint64_t>>> vals;
    for (auto& [f, d] : h2s) {
      auto& vv = vals[f];
      for (auto& b : d.basis) {
        std::vector<uint64_t> v(K);
        for (size_t j = 0; j < K; ++j) {
          unsigned __int128 acc = 0;
          for (size_t e = 0; e < b.size(); ++e)
            if (b[e] && kg.gens[j][e]) acc += static_cast<unsigned __int128>(b[e]) * (kg.gens[j][e] % f);
          v[j] = static_cast<uint64_t>(acc % f);
        }
        vv.push_back(std::move(v));
      }
    }
    std::vector<uint64_t> radix;  // mixed radix over all components' coordinates
    std::vector<std::pair<size_t, size_t>> slot;
    for (size_t i = 0; i < r; ++i) {
      const H2Data& d = h2s.at(A.factors[i]);
      for (size_t b = 0; b < d.orders.size(); ++b) {
        radix.push_back(d.orders[b]);
        slot.push_back({i, b});
      }
    }
    const uint64_t amax = A.factors.back();
    ZMod Rmax = ZMod::from_modulus(ell, amax);
    auto is_stem = [&](const std::vector<uint64_t>& digits) {
      std::vector<std::vector<uint64_t>> cols(K, std::vector<uint64_t>(r, 0));
      for (size_t s = 0; s < digits.size(); ++s) {
        if (!digits[s]) continue;
        auto [i, b] = slot[s];
        uint64_t f = A.factors[i];
        const auto& v = vals.at(f)[b];
        for (size_t j = 0; j < K; ++j) cols[j][i] = (cols[j][i] + digits[s] * v[j]) % f;
      }
      for (auto& c : cols)
        for (size_t i = 0; i < r; ++i) c[i] = c[i] * (amax / A.factors[i]);
      return span_order(cols, r, Rmax) == A.order();
    };
    long double space = 1;
    for (uint64_t x : radix) space *= x;
    std::vector<uint64_t> found;
    if (space <= 6561.0L) {
      std::vector<uint64_t> dg(radix.size(), 0);
      while (true) {
        if (is_stem(dg)) {
          found = dg;
          break;
        }
        size_t p = radix.size();
        bool done = true;
        while (p > 0) {
          --p;
          if (++dg[p] < radix[p]) {
            done = false;
            break;
          }
          dg[p] = 0;
        }
        if (done) break;
      }
    } else {
      std::mt19937_64 rng(0x5eedC0feULL ^ G->hash() ^ ell);
      for (int attempt = 0; attempt < 200000 && found.empty(); ++attempt) {
        std::vector<uint64_t> dg(radix.size());
        for (size_t s = 0; s < radix.size(); ++s) dg[s] = rng() % radix[s];
        if (is_stem(dg)) found = dg;
      }
    }
    require(!found.empty(), Err::SearchExhausted, "no stem class found for the l-cover");
    for (size_t i = 0; i < r; ++i) {
      const H2Data& d = h2s.at(A.factors[i]);
      std::vector<uint64_t> coords(d.orders.size(), 0);
      for (size_t s = 0; s < slot.size(); ++s)
        if (slot[s].first == i) coords[slot[s].second] = found[s];
      result.push_back(hopf->cocycle_from_functional(d.functional_of(coords), A.factors[i]));
    }
  }
  std::lock_guard<std::mutex> lk(g_cache_mu);
  g_class_cache.emplace(std::make_pair(G->hash(), ell), result);
  return result;
}

CentralExtension trivial_extension(GroupPtr G) {
  std::vector<Elt> id(G->order());
  std::iota(id.begin(), id.end(), 0);
  return make_central_extension(G, G, std::move(id));
}

}  // namespace

void clear_cover_cache() {
  std::lock_guard<std::mutex> lk(g_cache_mu);
  g_class_cache.clear();
}

CentralExtension l_schur_cover(GroupPtr G, uint64_t ell) {
  auto comps = l_cover_cocycles(G, ell);
  if (comps.empty()) return trivial_extension(G);
  CentralExtension ext = extension_from_cocycles(G, comps);
  require(ext.central_verified && ext.stem_verified, Err::SearchExhausted, "constructed l-cover is not stem");
  return ext;
}

CentralExtension schur_cover(GroupPtr G, std::vector<uint64_t> primes) {
  if (primes.empty()) primes = prime_factors(G->order());
  std::vector<Cocycle2> comps;
  for (uint64_t p : primes) {
    if (G->order() % p != 0) continue;
    auto c = l_cover_cocycles(G, p);
    comps.insert(comps.end(), c.begin(), c.end());
  }
  if (comps.empty()) return trivial_extension(G);
  CentralExtension ext = extension_from_cocycles(G, comps);
  require(ext.central_verified && ext.stem_verified, Err::SearchExhausted, "constructed cover is not stem");
  return ext;
}

CentralExtension reduce_cover(const CentralExtension& S, const CSet& c) {
  const FiniteGroup& G = *S.base;
  const FiniteGroup& T = *S.total;
  std::vector<Elt> seeds;
  for (Elt x : c.members)
    for (Elt y : centralizer(G, x)) {
      Elt k = T.comm(S.fibers[x][0], S.fibers[y][0]);
      if (k != T.id()) seeds.push_back(k);
    }
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  if (seeds.empty()) return S;
  Subgroup N = generated_subgroup(T, seeds);
  QuotientResult q = quotient(S.total, N);
  std::vector<Elt> pm(q.group->order());
  for (Elt x = 0; x < T.order(); ++x) pm[q.proj(x)] = S.proj(x);
  CentralExtension out = make_central_extension(q.group, S.base, std::move(pm));
  out.cocycle_hash = S.cocycle_hash;
  return out;
}

CentralExtension reduced_schur_cover(GroupPtr G, const CSet& c, std::vector<uint64_t> primes) {
  return reduce_cover(schur_cover(G, std::move(primes)), c);
}

// ---------------------------------------------------------------- lifts

Elt unique_same_order_lift(const CentralExtension& ext, Elt g) {
  const uint32_t o = ext.base->elem_order(g);
  require(std::gcd<uint64_t, uint64_t>(o, ext.kernel.size()) == 1, Err::NotUnique,
          "gcd(ord(g), |kernel|) != 1: same-order lift is not unique");
  Elt found = 0;
  int cnt = 0;
  for (Elt x : ext.fibers[g])
    if (ext.total->elem_order(x) == o) {
      found = x;
      ++cnt;
    }
  require(cnt >= 1, Err::NoSuchLift, "no lift of the same order");
  require(cnt == 1, Err::NotUnique, "same-order lift is not unique");
  return found;
}

Elt lifting_invariant(const std::vector<Elt>& tuple, const CentralExtension& ext) {
  require(generates(*ext.base, tuple), Err::NotGenerating, "tuple does not generate the group");
  Elt p = ext.total->id();
  for (Elt g : tuple) p = ext.total->mul(p, unique_same_order_lift(ext, g));
  require(ext.proj(p) == ext.base->id(), Err::InvalidArgument, "tuple product is not the identity");
  return p;
}

// ---------------------------------------------------------------- coinflation

std::vector<uint64_t> DualMultiplier::values(const std::vector<uint64_t>& f) const {
  std::vector<uint64_t> v(kgens.size());
  for (size_t j = 0; j < kgens.size(); ++j) {
    uint64_t acc = 0;
    for (size_t e = 0; e < f.size(); ++e)
      if (f[e] && kgens[j][e]) acc = R.add(acc, R.mul(f[e], kgens[j][e]));
    v[j] = acc;
  }
  return v;
}

std::vector<uint64_t> DualMultiplier::coords(const std::vector<uint64_t>& f) const {
  return dual.coords(values(f));
}

DualMultiplier dual_multiplier(GroupPtr G, uint64_t ell, int exp) {
  DualMultiplier dm;
  dm.R = ZMod(ell, exp);
  dm.hopf = std::make_shared<const HopfData>(G, G->gens());
  dm.h2 = compute_h2(dm.hopf, dm.R);
  dm.kgens = kernel_mod(dm.hopf->exponent_sum_matrix(dm.R), dm.R).gens;
  std::vector<std::vector<uint64_t>> rows;
  for (auto& b : dm.h2.basis) rows.push_back(dm.values(b));
  dm.dual = submodule_coords(rows, dm.kgens.size(), dm.R);
  dm.structure = normalize_factors(dm.dual.orders);
  return dm;
}

std::vector<uint64_t> CoinflationMap::apply(const std::vector<uint64_t>& x) const {
  std::vector<uint64_t> y(dst.factors.size(), 0);
  for (size_t j = 0; j < y.size(); ++j) {
    uint64_t acc = 0;
    for (size_t i = 0; i < x.size(); ++i) acc = (acc + matrix[j][i] * x[i]) % dst.factors[j];
    y[j] = acc;
  }
  return y;
}

CoinflationMap coinflation(const GroupHom& alpha, uint64_t ell) {
  require(alpha.surjective(), Err::InvalidArgument, "coinflation needs a surjection");
  GroupPtr G = alpha.src, H = alpha.dst;
  require(G->order() <= 128 && H->order() <= 128, Err::CapExceeded, "h2 is capped at |G| <= 128");
  const int N = std::max(design_exponent(*G, ell), design_exponent(*H, ell));
  DualMultiplier dg = dual_multiplier(G, ell, N), dh = dual_multiplier(H, ell, N);
  CoinflationMap cm;
  cm.src = AbelianStructure{dg.dual.orders};
  cm.dst = AbelianStructure{dh.dual.orders};
  const size_t nG = dg.dual.orders.size(), nH = dh.dual.orders.size();
  cm.matrix.assign(nH, std::vector<uint64_t>(nG, 0));
  const uint32_t n = G->order();
  for (size_t j = 0; j < nH; ++j) {
    std::vector<uint64_t> pre = dh.dual.preimage(j);
    std::vector<uint64_t> fH(dh.hopf->num_edges(), 0);
    for (size_t b = 0; b < pre.size(); ++b) {
      uint64_t c = pre[b] % dh.R.N;
      if (!c) continue;
      for (size_t e = 0; e < fH.size(); ++e) fH[e] = dh.R.add(fH[e], dh.R.mul(c, dh.h2.basis[b][e]));
    }
    Cocycle2 bH = dh.hopf->cocycle_from_functional(fH, dh.R.N);
    Cocycle2 bG{G, dh.R.N, std::vector<uint64_t>(static_cast<size_t>(n) * n)};
    for (Elt x = 0; x < n; ++x)
      for (Elt y = 0; y < n; ++y) bG.values[static_cast<size_t>(x) * n + y] = bH.at(alpha(x), alpha(y));
    std::vector<uint64_t> m = dg.coords(dg.hopf->functional_from_cocycle(bG));
    const uint64_t Bj = dh.dual.orders[j];
    for (size_t i = 0; i < nG; ++i) {
      const uint64_t Ai = dg.dual.orders[i];
      unsigned __int128 num = static_cast<unsigned __int128>(m[i]) * Bj;
      require(num % Ai == 0, Err::Internal, "coinflation entry is not integral");
      cm.matrix[j][i] = static_cast<uint64_t>((num / Ai) % Bj);
    }
  }
  return cm;
}

}  // namespace cll
