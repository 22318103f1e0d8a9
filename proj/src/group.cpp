#include "cll/group.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace cll {

namespace {

std::string triple_str(Elt a, Elt b, Elt c) {
  std::ostringstream os;
  os << "(" << a << "," << b << "," << c << ")";
  return os.str();
}

std::vector<Elt> sorted_from_marks(const std::vector<char>& mark) {
  std::vector<Elt> out;
  for (Elt i = 0; i < mark.size(); ++i)
    if (mark[i]) out.push_back(i);
  return out;
}

uint64_t gcd_u(uint64_t a, uint64_t b) { return std::gcd(a, b); }

}  // namespace

FiniteGroup FiniteGroup::from_mult_table(const std::vector<std::vector<Elt>>& table, Elt identity,
                                         std::vector<std::string> labels) {
  const size_t n = table.size();
  require(n > 0, Err::InvalidTable, "empty multiplication table");
  require(n <= kTableCap, Err::CapExceeded, "table order " + std::to_string(n) + " exceeds cap");
  std::vector<Elt> flat;
  flat.reserve(n * n);
  for (size_t i = 0; i < n; ++i) {
    require(table[i].size() == n, Err::InvalidTable, "row " + std::to_string(i) + " has wrong length");
    for (Elt v : table[i]) {
      require(v < n, Err::InvalidTable, "entry out of range in row " + std::to_string(i));
      flat.push_back(v);
    }
  }
  FiniteGroup g = from_flat(static_cast<uint32_t>(n), std::move(flat), identity, true);
  if (!labels.empty()) {
    require(labels.size() == n, Err::InvalidTable, "label count does not match order");
    g.labels_ = std::move(labels);
  }
  return g;
}

FiniteGroup FiniteGroup::from_flat(uint32_t n, std::vector<Elt> flat, Elt identity, bool validate) {
  require(n > 0 && flat.size() == static_cast<size_t>(n) * n, Err::InvalidTable, "table is not square");
  require(n <= kTableCap, Err::CapExceeded, "table order " + std::to_string(n) + " exceeds cap");
  require(identity < n, Err::NoIdentity, "identity index out of range");
  FiniteGroup g;
  g.n_ = n;
  g.id_ = identity;
  g.mult_ = std::move(flat);
  if (validate) {
    for (Elt v : g.mult_) require(v < n, Err::InvalidTable, "entry out of range");
    g.validate();
  }
  g.finish();
  return g;
}

void FiniteGroup::validate() const {
  const uint32_t n = n_;
  for (Elt x = 0; x < n; ++x)
    if (mul(id_, x) != x || mul(x, id_) != x)
      fail(Err::NoIdentity, "element " + std::to_string(id_) + " is not a two-sided identity (fails at " +
                                std::to_string(x) + ")");
  for (Elt x = 0; x < n; ++x) {
    bool found = false;
    for (Elt y = 0; y < n && !found; ++y)
      if (mul(x, y) == id_ && mul(y, x) == id_) found = true;
    if (!found) fail(Err::NoInverse, "element " + std::to_string(x) + " has no two-sided inverse");
  }
  if (n <= 512) {
    for (Elt a = 0; a < n; ++a)
      for (Elt b = 0; b < n; ++b) {
        const Elt ab = mul(a, b);
        for (Elt c = 0; c < n; ++c)
          if (mul(ab, c) != mul(a, mul(b, c)))
            fail(Err::NotAssociative, "associativity fails at triple " + triple_str(a, b, c));
      }
  } else {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ n);
    std::uniform_int_distribution<Elt> d(0, n - 1);
    for (int t = 0; t < 100000; ++t) {
      Elt a = d(rng), b = d(rng), c = d(rng);
      if (mul(mul(a, b), c) != mul(a, mul(b, c)))
        fail(Err::NotAssociative, "associativity fails at triple " + triple_str(a, b, c));
    }
  }
}

void FiniteGroup::finish() {
  inv_.assign(n_, 0);
  for (Elt x = 0; x < n_; ++x) {
    bool found = false;
    for (Elt y = 0; y < n_; ++y)
      if (mul(x, y) == id_) {
        inv_[x] = y;
        found = true;
        break;
      }
    if (!found) fail(Err::NoInverse, "element " + std::to_string(x) + " has no inverse");
  }
  orders_.assign(n_, 0);
  for (Elt x = 0; x < n_; ++x) {
    if (orders_[x]) continue;
    uint32_t k = 1;
    Elt y = x;
    while (y != id_) {
      y = mul(y, x);
      ++k;
      if (k > n_) fail(Err::InvalidTable, "element " + std::to_string(x) + " has no finite order");
    }
    orders_[x] = k;
  }
  gens_ = small_generating_set(*this);
}

Elt FiniteGroup::pow(Elt a, int64_t k) const {
  int64_t o = orders_[a];
  k %= o;
  if (k < 0) k += o;
  Elt r = id_, b = a;
  while (k) {
    if (k & 1) r = mul(r, b);
    b = mul(b, b);
    k >>= 1;
  }
  return r;
}

uint32_t FiniteGroup::exponent() const {
  uint64_t e = 1;
  for (uint32_t o : orders_) e = std::lcm(e, static_cast<uint64_t>(o));
  return static_cast<uint32_t>(e);
}

bool FiniteGroup::is_abelian() const {
  for (Elt a : gens_)
    for (Elt b : gens_)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

void FiniteGroup::set_gens(std::vector<Elt> gens) {
  for (Elt g : gens) require(g < n_, Err::BadIndex, "generator index out of range");
  require(generates(*this, gens), Err::NotGenerating, "listed generators do not generate the group");
  gens_ = std::move(gens);
}

uint64_t FiniteGroup::hash() const {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](uint64_t v) {
    for (int i = 0; i < 4; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(n_);
  mix(id_);
  for (Elt v : mult_) mix(v);
  return h;
}

GroupPtr make_group(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

// ---------------------------------------------------------------- homomorphisms

GroupHom GroupHom::make(GroupPtr src, GroupPtr dst, std::vector<Elt> map) {
  require(map.size() == src->order(), Err::NotHomomorphism, "map size does not match source order");
  for (Elt v : map) require(v < dst->order(), Err::NotHomomorphism, "image index out of range");
  require(map[src->id()] == dst->id(), Err::NotHomomorphism, "identity not mapped to identity");
  const uint32_t n = src->order();
  for (Elt x = 0; x < n; ++x)
    for (Elt y = 0; y < n; ++y)
      if (map[src->mul(x, y)] != dst->mul(map[x], map[y]))
        fail(Err::NotHomomorphism, "map(xy) != map(x)map(y) at (" + std::to_string(x) + "," + std::to_string(y) + ")");
  return GroupHom{std::move(src), std::move(dst), std::move(map)};
}

bool GroupHom::surjective() const { return image().size() == dst->order(); }

Subgroup GroupHom::kernel() const {
  Subgroup k;
  for (Elt x = 0; x < src->order(); ++x)
    if (map[x] == dst->id()) k.push_back(x);
  return k;
}

Subgroup GroupHom::image() const {
  std::vector<char> mark(dst->order(), 0);
  for (Elt v : map) mark[v] = 1;
  return sorted_from_marks(mark);
}

GroupHom GroupHom::compose_after(const GroupHom& first) const {
  require(first.dst->order() == src->order(), Err::InvalidArgument, "composition order mismatch");
  std::vector<Elt> m(first.src->order());
  for (Elt x = 0; x < m.size(); ++x) m[x] = map[first.map[x]];
  return GroupHom{first.src, dst, std::move(m)};
}

GroupHom hom_from_generator_images(GroupPtr src, const std::vector<Elt>& gens, GroupPtr dst,
                                   const std::vector<Elt>& images) {
  require(gens.size() == images.size(), Err::InvalidArgument, "generator/image count mismatch");
  const uint32_t n = src->order();
  constexpr Elt kUnset = ~Elt(0);
  std::vector<Elt> map(n, kUnset);
  map[src->id()] = dst->id();
  std::vector<Elt> queue{src->id()};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Elt x = queue[qi];
    for (size_t j = 0; j < gens.size(); ++j) {
      Elt y = src->mul(x, gens[j]);
      Elt img = dst->mul(map[x], images[j]);
      if (map[y] == kUnset) {
        map[y] = img;
        queue.push_back(y);
      } else if (map[y] != img) {
        fail(Err::NotHomomorphism, "generator images do not define a homomorphism");
      }
    }
  }
  require(queue.size() == n, Err::NotGenerating, "generators do not generate the source");
  return GroupHom{std::move(src), std::move(dst), std::move(map)};
}

// ---------------------------------------------------------------- Γ-groups

GammaGroup GammaGroup::make(GroupPtr group, GroupPtr gamma, std::vector<Elt> action) {
  const uint32_t n = group->order(), m = gamma->order();
  require(action.size() == static_cast<size_t>(n) * m, Err::InvalidAction, "action table has wrong size");
  GammaGroup G{group, gamma, std::move(action)};
  for (Elt g = 0; g < m; ++g) {
    std::vector<char> hit(n, 0);
    for (Elt h = 0; h < n; ++h) {
      Elt v = G.act(g, h);
      require(v < n, Err::InvalidAction, "action value out of range");
      hit[v] = 1;
    }
    for (char c : hit) require(c, Err::InvalidAction, "action of a Γ element is not bijective");
    for (Elt a = 0; a < n; ++a)
      for (Elt b = 0; b < n; ++b)
        if (G.act(g, group->mul(a, b)) != group->mul(G.act(g, a), G.act(g, b)))
          fail(Err::InvalidAction, "action of Γ element " + std::to_string(g) + " is not a homomorphism");
  }
  for (Elt h = 0; h < n; ++h) require(G.act(gamma->id(), h) == h, Err::InvalidAction, "identity of Γ acts nontrivially");
  for (Elt g1 = 0; g1 < m; ++g1)
    for (Elt g2 = 0; g2 < m; ++g2)
      for (Elt h = 0; h < n; ++h)
        if (G.act(gamma->mul(g1, g2), h) != G.act(g1, G.act(g2, h)))
          fail(Err::InvalidAction, "action is not a homomorphism from Γ");
  return G;
}

GammaGroup GammaGroup::trivial(GroupPtr group, GroupPtr gamma) {
  const uint32_t n = group->order(), m = gamma->order();
  std::vector<Elt> a(static_cast<size_t>(n) * m);
  for (Elt g = 0; g < m; ++g)
    for (Elt h = 0; h < n; ++h) a[static_cast<size_t>(g) * n + h] = h;
  return GammaGroup{std::move(group), std::move(gamma), std::move(a)};
}

SemidirectResult semidirect_product(const GammaGroup& act) {
  const FiniteGroup& H = *act.group;
  const FiniteGroup& Gm = *act.gamma;
  const uint32_t nh = H.order(), ng = Gm.order();
  const uint64_t n = static_cast<uint64_t>(nh) * ng;
  require(n <= kTableCap, Err::CapExceeded, "semidirect product exceeds table cap");
  std::vector<Elt> flat(n * n);
  for (Elt g = 0; g < ng; ++g)
    for (Elt h = 0; h < nh; ++h)
      for (Elt g2 = 0; g2 < ng; ++g2)
        for (Elt h2 = 0; h2 < nh; ++h2) {
          Elt a = h + nh * g, b = h2 + nh * g2;
          Elt hh = H.mul(h, act.act(g, h2));
          Elt gg = Gm.mul(g, g2);
          flat[static_cast<size_t>(a) * n + b] = hh + nh * gg;
        }
  FiniteGroup P = FiniteGroup::from_flat(static_cast<uint32_t>(n), std::move(flat), H.id() + nh * Gm.id(), true);
  GroupPtr Pp = make_group(std::move(P));
  std::vector<Elt> eh(nh), eg(ng), pg(n);
  for (Elt h = 0; h < nh; ++h) eh[h] = h + nh * Gm.id();
  for (Elt g = 0; g < ng; ++g) eg[g] = H.id() + nh * g;
  for (Elt x = 0; x < n; ++x) pg[x] = x / nh;
  SemidirectResult r;
  r.group = Pp;
  r.emb_h = GroupHom::make(act.group, Pp, eh);
  r.emb_gamma = GroupHom::make(act.gamma, Pp, eg);
  r.proj_gamma = GroupHom::make(Pp, act.gamma, pg);
  return r;
}

// ---------------------------------------------------------------- c-sets

CSet CSet::make(GroupPtr group, std::vector<Elt> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  const FiniteGroup& G = *group;
  std::vector<char> in(G.order(), 0);
  for (Elt x : members) {
    require(x < G.order(), Err::BadIndex, "c-set member out of range");
    in[x] = 1;
  }
  for (Elt x : members) {
    for (Elt g : G.gens())
      require(in[G.conj(x, g)], Err::InvalidArgument, "c-set is not closed under conjugation");
    const uint32_t o = G.elem_order(x);
    for (uint32_t k = 1; k < o; ++k)
      if (gcd_u(k, o) == 1) require(in[G.pow(x, k)], Err::InvalidArgument, "c-set is not closed under invertible powering");
  }
  return CSet{std::move(group), std::move(members)};
}

bool CSet::contains(Elt x) const { return std::binary_search(members.begin(), members.end(), x); }

// ---------------------------------------------------------------- subgroups

Subgroup generated_subgroup(const FiniteGroup& G, const std::vector<Elt>& seeds) {
  std::vector<char> mark(G.order(), 0);
  std::vector<Elt> queue{G.id()};
  mark[G.id()] = 1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Elt x = queue[qi];
    for (Elt s : seeds) {
      Elt y = G.mul(x, s);
      if (!mark[y]) {
        mark[y] = 1;
        queue.push_back(y);
      }
    }
  }
  return sorted_from_marks(mark);
}

bool generates(const FiniteGroup& G, const std::vector<Elt>& seeds) {
  return generated_subgroup(G, seeds).size() == G.order();
}

Subgroup normal_closure(const FiniteGroup& G, const std::vector<Elt>& seeds, const GammaGroup* gamma) {
  std::vector<Elt> S;
  for (Elt s : seeds)
    if (s != G.id()) S.push_back(s);
  std::vector<char> in(G.order(), 0);
  while (true) {
    Subgroup H = generated_subgroup(G, S);
    std::fill(in.begin(), in.end(), 0);
    for (Elt h : H) in[h] = 1;
    std::vector<Elt> extra;
    for (Elt s : S) {
      for (Elt g : G.gens()) {
        Elt c = G.conj(s, g);
        if (!in[c]) {
          in[c] = 1;
          extra.push_back(c);
        }
      }
      if (gamma)
        for (Elt gm : gamma->gamma->gens()) {
          Elt c = gamma->act(gm, s);
          if (!in[c]) {
            in[c] = 1;
            extra.push_back(c);
          }
        }
    }
    if (extra.empty()) return H;
    S.insert(S.end(), extra.begin(), extra.end());
  }
}

bool is_subgroup(const FiniteGroup& G, const Subgroup& N) {
  std::vector<char> in(G.order(), 0);
  for (Elt x : N) in[x] = 1;
  if (!in[G.id()]) return false;
  for (Elt a : N)
    for (Elt b : N)
      if (!in[G.mul(a, b)]) return false;
  return true;
}

bool is_normal(const FiniteGroup& G, const Subgroup& N) {
  if (!is_subgroup(G, N)) return false;
  std::vector<char> in(G.order(), 0);
  for (Elt x : N) in[x] = 1;
  for (Elt x : N)
    for (Elt g : G.gens())
      if (!in[G.conj(x, g)]) return false;
  return true;
}

QuotientResult quotient(GroupPtr Gp, const Subgroup& N) {
  const FiniteGroup& G = *Gp;
  require(is_normal(G, N), Err::NotNormal, "subgroup is not normal");
  const uint32_t n = G.order();
  constexpr Elt kUnset = ~Elt(0);
  std::vector<Elt> coset(n, kUnset), reps;
  for (Elt x = 0; x < n; ++x) {
    if (coset[x] != kUnset) continue;
    Elt c = static_cast<Elt>(reps.size());
    reps.push_back(x);
    for (Elt k : N) coset[G.mul(x, k)] = c;
  }
  const uint32_t m = static_cast<uint32_t>(reps.size());
  std::vector<Elt> flat(static_cast<size_t>(m) * m);
  for (Elt a = 0; a < m; ++a)
    for (Elt b = 0; b < m; ++b) flat[static_cast<size_t>(a) * m + b] = coset[G.mul(reps[a], reps[b])];
  GroupPtr Q = make_group(FiniteGroup::from_flat(m, std::move(flat), coset[G.id()], m <= 512));
  return QuotientResult{Q, GroupHom{Gp, Q, coset}};
}

Subgroup commutator_subgroup(const FiniteGroup& G) {
  std::vector<Elt> seeds;
  for (Elt a : G.gens())
    for (Elt b : G.gens()) seeds.push_back(G.comm(a, b));
  return normal_closure(G, seeds);
}

std::vector<Subgroup> lower_central_series(const FiniteGroup& G) {
  std::vector<Subgroup> series;
  Subgroup cur(G.order());
  std::iota(cur.begin(), cur.end(), 0);
  series.push_back(cur);
  while (true) {
    std::vector<Elt> seeds;
    for (Elt x : cur)
      for (Elt g : G.gens()) seeds.push_back(G.comm(x, g));
    Subgroup next = normal_closure(G, seeds);
    if (next == cur) break;
    series.push_back(next);
    cur = next;
  }
  return series;
}

Subgroup center(const FiniteGroup& G) {
  Subgroup z;
  for (Elt x = 0; x < G.order(); ++x) {
    bool ok = true;
    for (Elt g : G.gens())
      if (G.mul(x, g) != G.mul(g, x)) {
        ok = false;
        break;
      }
    if (ok) z.push_back(x);
  }
  return z;
}

Subgroup centralizer(const FiniteGroup& G, Elt x) {
  Subgroup c;
  for (Elt g = 0; g < G.order(); ++g)
    if (G.mul(x, g) == G.mul(g, x)) c.push_back(g);
  return c;
}

std::vector<std::vector<Elt>> conjugacy_classes(const FiniteGroup& G) {
  std::vector<char> seen(G.order(), 0);
  std::vector<std::vector<Elt>> classes;
  for (Elt x = 0; x < G.order(); ++x) {
    if (seen[x]) continue;
    std::vector<Elt> cls{x};
    seen[x] = 1;
    for (size_t i = 0; i < cls.size(); ++i)
      for (Elt g : G.gens()) {
        Elt y = G.conj(cls[i], g);
        if (!seen[y]) {
          seen[y] = 1;
          cls.push_back(y);
        }
      }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

std::vector<Elt> small_generating_set(const FiniteGroup& G) {
  std::vector<Elt> gens;
  std::vector<char> in(G.order(), 0);
  in[G.id()] = 1;
  size_t have = 1;
  while (have < G.order()) {
    // Pick the outside element of largest order; ties by index.
    Elt best = 0;
    uint32_t best_o = 0;
    for (Elt x = 0; x < G.order(); ++x)
      if (!in[x] && G.elem_order(x) > best_o) {
        best = x;
        best_o = G.elem_order(x);
      }
    gens.push_back(best);
    Subgroup S = generated_subgroup(G, gens);
    for (Elt s : S) in[s] = 1;
    have = S.size();
  }
  return gens;
}

// ---------------------------------------------------------------- Γ-group predicates

bool is_admissible(const GammaGroup& H) {
  require(gcd_u(H.group->order(), H.gamma->order()) == 1, Err::OrdersNotCoprime,
          "|H| and |Γ| are not coprime");
  const FiniteGroup& G = *H.group;
  std::vector<Elt> seeds;
  for (Elt g = 0; g < H.gamma->order(); ++g)
    for (Elt h = 0; h < G.order(); ++h) seeds.push_back(G.mul(G.inv(h), H.act(g, h)));
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  return generated_subgroup(G, seeds).size() == G.order();
}

Subgroup fixed_subgroup(const GammaGroup& H) {
  Subgroup f;
  for (Elt h = 0; h < H.group->order(); ++h) {
    bool ok = true;
    for (Elt g : H.gamma->gens())
      if (H.act(g, h) != h) {
        ok = false;
        break;
      }
    if (ok) f.push_back(h);
  }
  return f;
}

uint32_t fixed_index(const GammaGroup& H) {
  return H.group->order() / static_cast<uint32_t>(fixed_subgroup(H).size());
}

// ---------------------------------------------------------------- surjections

void for_each_hom(const FiniteGroup& G, const FiniteGroup& H, const SurjOptions& opt,
                  const std::function<bool(const std::vector<Elt>&)>& fn) {
  require(G.order() <= opt.cap && H.order() <= opt.cap, Err::CapExceeded,
          "surjection enumeration cap exceeded (" + std::to_string(G.order()) + " -> " +
              std::to_string(H.order()) + ")");
  const bool equiv = opt.gamma_src && opt.gamma_dst;
  if (equiv)
    require(opt.gamma_src->gamma->order() == opt.gamma_dst->gamma->order(), Err::InvalidArgument,
            "Γ groups differ in order");
  const std::vector<Elt>& gens = G.gens();
  const size_t k = gens.size();
  constexpr Elt kUnset = ~Elt(0);
  std::vector<std::vector<Elt>> cand(k);
  for (size_t i = 0; i < k; ++i)
    for (Elt h = 0; h < H.order(); ++h)
      if (G.elem_order(gens[i]) % H.elem_order(h) == 0) cand[i].push_back(h);
  std::vector<Elt> img(k), map(G.order(), kUnset);
  std::vector<Elt> queue;
  queue.reserve(G.order());
  // Fills map on <g_0..g_{d-1}>; false on conflict.
  auto consistent = [&](size_t d) {
    std::fill(map.begin(), map.end(), kUnset);
    queue.clear();
    map[G.id()] = H.id();
    queue.push_back(G.id());
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      Elt x = queue[qi];
      for (size_t j = 0; j < d; ++j) {
        Elt y = G.mul(x, gens[j]);
        Elt v = H.mul(map[x], img[j]);
        if (map[y] == kUnset) {
          map[y] = v;
          queue.push_back(y);
        } else if (map[y] != v) {
          return false;
        }
      }
    }
    return true;
  };
  std::vector<char> mark(H.order());
  bool stop = false;
  std::function<void(size_t)> rec = [&](size_t d) {
    if (stop) return;
    if (d == k) {
      if (opt.surjective_only) {
        std::fill(mark.begin(), mark.end(), 0);
        size_t cnt = 0;
        for (Elt v : map)
          if (!mark[v]) {
            mark[v] = 1;
            ++cnt;
          }
        if (cnt != H.order()) return;
      }
      if (equiv) {
        for (Elt gm : opt.gamma_src->gamma->gens())
          for (size_t j = 0; j < k; ++j)
            if (map[opt.gamma_src->act(gm, gens[j])] != opt.gamma_dst->act(gm, img[j])) return;
      }
      if (!fn(map)) stop = true;
      return;
    }
    for (Elt h : cand[d]) {
      img[d] = h;
      if (!consistent(d + 1)) continue;
      rec(d + 1);
      if (stop) return;
    }
  };
  if (k == 0) {
    map.assign(G.order(), H.id());
    if (!opt.surjective_only || H.order() == 1) fn(map);
    return;
  }
  rec(0);
}

std::vector<GroupHom> enumerate_surjections(GroupPtr G, GroupPtr H, const GammaGroup* gamma_G,
                                            const GammaGroup* gamma_H) {
  SurjOptions opt;
  opt.gamma_src = gamma_G;
  opt.gamma_dst = gamma_H;
  std::vector<GroupHom> out;
  for_each_hom(*G, *H, opt, [&](const std::vector<Elt>& m) {
    out.push_back(GroupHom{G, H, m});
    return true;
  });
  return out;
}

uint64_t count_surjections(const FiniteGroup& G, const FiniteGroup& H, const GammaGroup* gamma_G,
                           const GammaGroup* gamma_H) {
  SurjOptions opt;
  opt.gamma_src = gamma_G;
  opt.gamma_dst = gamma_H;
  uint64_t c = 0;
  for_each_hom(G, H, opt, [&](const std::vector<Elt>&) {
    ++c;
    return true;
  });
  return c;
}

// ---------------------------------------------------------------- catalog

GroupPtr cyclic_group(uint32_t m) {
  require(m >= 1 && m <= kTableCap, Err::InvalidArgument, "cyclic order out of range");
  std::vector<Elt> flat(static_cast<size_t>(m) * m);
  for (Elt a = 0; a < m; ++a)
    for (Elt b = 0; b < m; ++b) flat[static_cast<size_t>(a) * m + b] = (a + b) % m;
  FiniteGroup g = FiniteGroup::from_flat(m, std::move(flat), 0, true);
  if (m > 1) g.set_gens({1});
  return make_group(std::move(g));
}

GroupPtr elem_abelian_group(uint32_t l, uint32_t r) {
  require(l >= 2, Err::InvalidArgument, "elementary abelian base must be >= 2");
  uint64_t n = 1;
  for (uint32_t i = 0; i < r; ++i) n *= l;
  require(n <= kTableCap, Err::CapExceeded, "elementary abelian group exceeds table cap");
  std::vector<Elt> flat(n * n);
  for (Elt a = 0; a < n; ++a)
    for (Elt b = 0; b < n; ++b) {
      Elt x = a, y = b, s = 0, p = 1;
      for (uint32_t i = 0; i < r; ++i) {
        s += ((x % l + y % l) % l) * p;
        x /= l;
        y /= l;
        p *= l;
      }
      flat[a * n + b] = s;
    }
  FiniteGroup g = FiniteGroup::from_flat(static_cast<uint32_t>(n), std::move(flat), 0, true);
  std::vector<Elt> gens;
  Elt p = 1;
  for (uint32_t i = 0; i < r; ++i, p *= l) gens.push_back(p);
  if (!gens.empty()) g.set_gens(gens);
  return make_group(std::move(g));
}

GroupPtr heisenberg_group(uint32_t l) {
  require(l >= 2, Err::InvalidArgument, "heisenberg parameter must be >= 2");
  const uint64_t n = static_cast<uint64_t>(l) * l * l;
  require(n <= kTableCap, Err::CapExceeded, "heisenberg group exceeds table cap");
  auto idx = [l](uint32_t a, uint32_t b, uint32_t c) { return a + l * b + l * l * c; };
  std::vector<Elt> flat(n * n);
  for (Elt x = 0; x < n; ++x)
    for (Elt y = 0; y < n; ++y) {
      uint32_t a = x % l, b = (x / l) % l, c = x / (l * l);
      uint32_t a2 = y % l, b2 = (y / l) % l, c2 = y / (l * l);
      flat[x * n + y] = idx((a + a2) % l, (b + b2) % l, (c + c2 + a * b2) % l);
    }
  FiniteGroup g = FiniteGroup::from_flat(static_cast<uint32_t>(n), std::move(flat), 0, true);
  g.set_gens({idx(1, 0, 0), idx(0, 1, 0)});
  return make_group(std::move(g));
}

GroupPtr dihedral_group(uint32_t m) {
  require(m >= 1 && 2 * m <= kTableCap, Err::InvalidArgument, "dihedral parameter out of range");
  const uint32_t n = 2 * m;
  std::vector<Elt> flat(static_cast<size_t>(n) * n);
  for (Elt x = 0; x < n; ++x)
    for (Elt y = 0; y < n; ++y) {
      uint32_t a = x % m, e = x / m, b = y % m, f = y / m;
      uint32_t k = e ? (a + m - b) % m : (a + b) % m;
      flat[x * n + y] = k + m * ((e + f) % 2);
    }
  FiniteGroup g = FiniteGroup::from_flat(n, std::move(flat), 0, true);
  if (m > 1) g.set_gens({1 % m, m});
  else g.set_gens({m});
  return make_group(std::move(g));
}

GroupPtr direct_product(const FiniteGroup& A, const FiniteGroup& B) {
  const uint64_t na = A.order(), nb = B.order(), n = na * nb;
  require(n <= kTableCap, Err::CapExceeded, "direct product exceeds table cap");
  std::vector<Elt> flat(n * n);
  for (Elt x = 0; x < n; ++x)
    for (Elt y = 0; y < n; ++y)
      flat[x * n + y] = A.mul(x % na, y % na) + na * B.mul(x / na, y / na);
  return make_group(FiniteGroup::from_flat(static_cast<uint32_t>(n), std::move(flat),
                                           A.id() + na * B.id(), true));
}

GroupPtr group_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(Err::ParseError, std::string("group JSON parse error: ") + e.what());
  }
  require(j.contains("mult") && j["mult"].is_array(), Err::ParseError, "group JSON lacks 'mult'");
  std::vector<std::vector<Elt>> table;
  try {
    table = j["mult"].get<std::vector<std::vector<Elt>>>();
  } catch (const std::exception&) {
    fail(Err::ParseError, "group JSON 'mult' is not an integer matrix");
  }
  if (j.contains("order"))
    require(j["order"].get<size_t>() == table.size(), Err::InvalidTable, "'order' does not match table size");
  Elt e = 0;
  if (j.contains("identity")) {
    e = j["identity"].get<Elt>();
  } else {
    bool found = false;
    for (Elt c = 0; c < table.size() && !found; ++c) {
      bool ok = table[c].size() == table.size();
      for (Elt x = 0; ok && x < table.size(); ++x) ok = table[c][x] == x;
      if (ok) {
        e = c;
        found = true;
      }
    }
    require(found, Err::NoIdentity, "no identity row in table");
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  FiniteGroup g = FiniteGroup::from_mult_table(table, e, labels);
  if (j.contains("gens")) g.set_gens(j["gens"].get<std::vector<Elt>>());
  return make_group(std::move(g));
}

GroupPtr group_from_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Err::IoError, "cannot open group file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return group_from_json_text(ss.str());
}

namespace {

uint32_t parse_u32(const std::string& s, const std::string& ctx) {
  require(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos, Err::ParseError,
          "bad integer '" + s + "' in " + ctx);
  unsigned long v = std::stoul(s);
  require(v <= 1u << 20, Err::ParseError, "integer too large in " + ctx);
  return static_cast<uint32_t>(v);
}

std::pair<uint32_t, uint32_t> parse_power(const std::string& s, const std::string& ctx) {
  auto caret = s.find('^');
  if (caret == std::string::npos) return {parse_u32(s, ctx), 1};
  return {parse_u32(s.substr(0, caret), ctx), parse_u32(s.substr(caret + 1), ctx)};
}

}  // namespace

GammaGroup inversion_action(GroupPtr H) {
  GroupPtr C2 = cyclic_group(2);
  const uint32_t n = H->order();
  std::vector<Elt> inv_map;
  if (H->is_abelian()) {
    inv_map.resize(n);
    for (Elt x = 0; x < n; ++x) inv_map[x] = H->inv(x);
  } else {
    std::vector<Elt> imgs;
    for (Elt g : H->gens()) imgs.push_back(H->inv(g));
    inv_map = hom_from_generator_images(H, H->gens(), H, imgs).map;
  }
  std::vector<Elt> action(2 * static_cast<size_t>(n));
  for (Elt x = 0; x < n; ++x) {
    action[x] = x;
    action[n + x] = inv_map[x];
  }
  return GammaGroup::make(H, C2, std::move(action));
}

GroupPtr catalog_group(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (kind == "cyclic") return cyclic_group(parse_u32(arg, spec));
    if (kind == "elem_abelian") {
      auto [l, r] = parse_power(arg, spec);
      return elem_abelian_group(l, r);
    }
    if (kind == "heisenberg") return heisenberg_group(parse_u32(arg, spec));
    if (kind == "dihedral") return dihedral_group(parse_u32(arg, spec));
    if (kind == "semidirect_inversion") {
      auto [l, r] = parse_power(arg, spec);
      require(l % 2 == 1, Err::InvalidArgument, "semidirect_inversion needs an odd base");
      return semidirect_product(inversion_action(elem_abelian_group(l, r))).group;
    }
  }
  if (spec == "trivial") return cyclic_group(1);
  std::ifstream probe(spec);
  if (probe.good()) return group_from_json_file(spec);
  fail(Err::ParseError, "unknown group spec '" + spec + "'");
}

GammaGroup gamma_group_from_spec(const std::string& spec) {
  std::string g = spec, a = "inversion";
  auto at = spec.rfind('@');
  if (at != std::string::npos) {
    g = spec.substr(0, at);
    a = spec.substr(at + 1);
  }
  GroupPtr H = catalog_group(g);
  if (a == "inversion") return inversion_action(H);
  if (a == "trivial") return GammaGroup::trivial(H, cyclic_group(2));
  fail(Err::ParseError, "unknown action '" + a + "'");
}

CSet cset_from_spec(GroupPtr G, const std::string& spec, const Subgroup* kernel_part) {
  std::vector<Elt> mem;
  if (spec == "all") {
    for (Elt x = 0; x < G->order(); ++x)
      if (x != G->id()) mem.push_back(x);
  } else if (spec.rfind("order:", 0) == 0) {
    uint32_t k = parse_u32(spec.substr(6), spec);
    for (Elt x = 0; x < G->order(); ++x)
      if (G->elem_order(x) == k) mem.push_back(x);
  } else if (spec.rfind("elements:", 0) == 0) {
    std::stringstream ss(spec.substr(9));
    std::string tok;
    while (std::getline(ss, tok, ',')) mem.push_back(parse_u32(tok, spec));
  } else if (spec == "gamma-nontrivial") {
    require(kernel_part != nullptr, Err::InvalidArgument, "gamma-nontrivial needs the kernel subgroup");
    std::vector<char> in(G->order(), 0);
    for (Elt x : *kernel_part) in[x] = 1;
    for (Elt x = 0; x < G->order(); ++x)
      if (!in[x]) mem.push_back(x);
  } else {
    fail(Err::ParseError, "unknown c-set spec '" + spec + "'");
  }
  return CSet::make(G, mem);
}

GroupPtr relabel(const FiniteGroup& G, const std::vector<Elt>& perm) {
  const uint32_t n = G.order();
  require(perm.size() == n, Err::InvalidArgument, "permutation size mismatch");
  std::vector<Elt> flat(static_cast<size_t>(n) * n);
  for (Elt a = 0; a < n; ++a)
    for (Elt b = 0; b < n; ++b) flat[static_cast<size_t>(perm[a]) * n + perm[b]] = perm[G.mul(a, b)];
  return make_group(FiniteGroup::from_flat(n, std::move(flat), perm[G.id()], true));
}

std::string group_to_json(const FiniteGroup& G) {
  nlohmann::json j;
  j["order"] = G.order();
  std::vector<std::vector<Elt>> rows(G.order(), std::vector<Elt>(G.order()));
  for (Elt a = 0; a < G.order(); ++a)
    for (Elt b = 0; b < G.order(); ++b) rows[a][b] = G.mul(a, b);
  j["mult"] = rows;
  j["identity"] = G.id();
  if (!G.labels().empty()) j["labels"] = G.labels();
  return j.dump();
}

std::vector<uint64_t> fingerprint(const FiniteGroup& G) {
  std::vector<uint64_t> fp;
  fp.push_back(G.order());
  std::vector<uint64_t> ords;
  for (Elt x = 0; x < G.order(); ++x) ords.push_back(G.elem_order(x));
  std::sort(ords.begin(), ords.end());
  fp.insert(fp.end(), ords.begin(), ords.end());
  std::vector<uint64_t> cls;
  for (auto& c : conjugacy_classes(G)) cls.push_back(c.size() * 4096 + G.elem_order(c[0]));
  std::sort(cls.begin(), cls.end());
  fp.insert(fp.end(), cls.begin(), cls.end());
  return fp;
}

}  // namespace cll
