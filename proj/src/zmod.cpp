#include "cll/zmod.hpp"

#include <algorithm>
#include <numeric>

namespace cll {

ZMod::ZMod(uint64_t p_, int k_) : p(p_), k(k_) {
  require(p_ >= 2 && k_ >= 1, Err::InvalidArgument, "bad modulus p^k");
  unsigned __int128 n = 1;
  for (int i = 0; i < k_; ++i) {
    n *= p_;
    require(n < (static_cast<unsigned __int128>(1) << 62), Err::CapExceeded, "modulus exceeds 2^62");
  }
  N = static_cast<uint64_t>(n);
}

ZMod ZMod::from_modulus(uint64_t prime, uint64_t modulus) {
  int k = 0;
  uint64_t m = modulus;
  while (m > 1) {
    require(m % prime == 0, Err::InvalidArgument, "modulus is not a prime power");
    m /= prime;
    ++k;
  }
  require(k >= 1, Err::InvalidArgument, "modulus must exceed 1");
  return ZMod(prime, k);
}

int ZMod::val(uint64_t a) const {
  a %= N;
  if (a == 0) return k;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

uint64_t mod_inverse(int64_t a, int64_t m) {
  int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  int64_t b = a1;
  while (b) {
    int64_t q = g / b;
    int64_t t = g - q * b;
    g = b;
    b = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  require(g == 1, Err::InvalidArgument, "element is not invertible");
  return static_cast<uint64_t>(((x % m) + m) % m);
}

uint64_t ZMod::unit_inv(uint64_t a) const {
  return mod_inverse(static_cast<int64_t>(a % N), static_cast<int64_t>(N));
}

uint64_t ZMod::ppow(int e) const {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

Mat Mat::identity(size_t n) {
  Mat m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

SNF smith_normal_form(const Mat& A0, const ZMod& R, bool track_P, bool track_Q) {
  Mat A = A0;
  for (auto& x : A.a) x %= R.N;
  const size_t m = A.rows, n = A.cols;
  SNF out;
  if (track_P) {
    out.P = Mat::identity(m);
    out.Pinv = Mat::identity(m);
  }
  if (track_Q) {
    out.Q = Mat::identity(n);
    out.Qinv = Mat::identity(n);
  }
  const size_t r = std::min(m, n);
  out.vals.assign(r, R.k);
  auto swap_rows = [&](Mat& M, size_t i, size_t j) {
    if (i == j) return;
    for (size_t c = 0; c < M.cols; ++c) std::swap(M(i, c), M(j, c));
  };
  auto swap_cols = [&](Mat& M, size_t i, size_t j) {
    if (i == j) return;
    for (size_t rr = 0; rr < M.rows; ++rr) std::swap(M(rr, i), M(rr, j));
  };
  for (size_t t = 0; t < r; ++t) {
    int best = R.k;
    size_t bi = 0, bj = 0;
    for (size_t i = t; i < m && best > 0; ++i)
      for (size_t j = t; j < n; ++j) {
        uint64_t x = A(i, j);
        if (!x) continue;
        int v = R.val(x);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (best == R.k) break;
    swap_rows(A, t, bi);
    swap_cols(A, t, bj);
    if (track_P) {
      swap_rows(out.P, t, bi);
      swap_cols(out.Pinv, t, bi);
    }
    if (track_Q) {
      swap_cols(out.Q, t, bj);
      swap_rows(out.Qinv, t, bj);
    }
    const uint64_t pv = R.ppow(best);
    const uint64_t unit = A(t, t) / pv;
    const uint64_t uinv = R.unit_inv(unit);
    for (size_t c = t; c < n; ++c) A(t, c) = R.mul(A(t, c), uinv);
    if (track_P) {
      for (size_t c = 0; c < m; ++c) out.P(t, c) = R.mul(out.P(t, c), uinv);
      for (size_t rr = 0; rr < m; ++rr) out.Pinv(rr, t) = R.mul(out.Pinv(rr, t), unit % R.N);
    }
    // Row elimination.
    for (size_t i = t + 1; i < m; ++i) {
      uint64_t x = A(i, t);
      if (!x) continue;
      uint64_t b = x / pv;  // exact: valuation of x >= best
      for (size_t c = t; c < n; ++c)
        if (A(t, c)) A(i, c) = R.sub(A(i, c), R.mul(b, A(t, c)));
      if (track_P) {
        for (size_t c = 0; c < m; ++c)
          if (out.P(t, c)) out.P(i, c) = R.sub(out.P(i, c), R.mul(b, out.P(t, c)));
        for (size_t rr = 0; rr < m; ++rr)
          if (out.Pinv(rr, i)) out.Pinv(rr, t) = R.add(out.Pinv(rr, t), R.mul(b, out.Pinv(rr, i)));
      }
    }
    // Column elimination (row t now has p^best at (t,t) and only row t matters).
    for (size_t j = t + 1; j < n; ++j) {
      uint64_t x = A(t, j);
      if (!x) continue;
      uint64_t b = x / pv;
      A(t, j) = 0;
      if (track_Q) {
        for (size_t rr = 0; rr < n; ++rr)
          if (out.Q(rr, t)) out.Q(rr, j) = R.sub(out.Q(rr, j), R.mul(b, out.Q(rr, t)));
        for (size_t c = 0; c < n; ++c)
          if (out.Qinv(j, c)) out.Qinv(t, c) = R.add(out.Qinv(t, c), R.mul(b, out.Qinv(j, c)));
      }
    }
    out.vals[t] = best;
    out.rank = t + 1;
  }
  return out;
}

KernelGens kernel_mod(const Mat& A, const ZMod& R) {
  SNF s = smith_normal_form(A, R, false, true);
  KernelGens kg;
  const size_t n = A.cols;
  for (size_t i = 0; i < n; ++i) {
    int v = i < s.vals.size() ? s.vals[i] : R.k;
    if (i < s.rank && v == 0) continue;
    uint64_t scale = (i < s.rank) ? R.ppow(R.k - v) : 1;
    uint64_t order = (i < s.rank) ? R.ppow(v) : R.N;
    std::vector<uint64_t> g(n);
    for (size_t rr = 0; rr < n; ++rr) g[rr] = R.mul(scale, s.Q(rr, i));
    kg.gens.push_back(std::move(g));
    kg.orders.push_back(order);
  }
  return kg;
}

uint64_t AbelianStructure::order() const {
  uint64_t o = 1;
  for (uint64_t f : factors) o *= f;
  return o;
}

AbelianStructure normalize_factors(std::vector<uint64_t> factors) {
  factors.erase(std::remove(factors.begin(), factors.end(), 1ULL), factors.end());
  std::sort(factors.begin(), factors.end());
  return AbelianStructure{factors};
}

QuotientModule quotient_module(const Mat& rels, size_t t, const ZMod& R) {
  require(rels.cols == t, Err::Internal, "relation matrix width mismatch");
  QuotientModule qm;
  qm.R = R;
  SNF s = smith_normal_form(rels, R, false, true);
  for (size_t i = 0; i < t; ++i) {
    int v = (i < s.vals.size()) ? s.vals[i] : R.k;
    if (v == 0) continue;
    qm.orders.push_back(R.ppow(v));
    qm.index.push_back(i);
  }
  qm.Q = std::move(s.Q);
  qm.Qinv = std::move(s.Qinv);
  return qm;
}

std::vector<uint64_t> QuotientModule::coords(const std::vector<uint64_t>& x) const {
  std::vector<uint64_t> c(orders.size());
  for (size_t f = 0; f < orders.size(); ++f) {
    size_t col = index[f];
    uint64_t acc = 0;
    for (size_t j = 0; j < x.size(); ++j)
      if (x[j]) acc = R.add(acc, R.mul(x[j] % R.N, Q(j, col)));
    c[f] = acc % orders[f];
  }
  return c;
}

std::vector<uint64_t> QuotientModule::basis_vector(size_t f) const {
  std::vector<uint64_t> v(Qinv.cols);
  for (size_t j = 0; j < Qinv.cols; ++j) v[j] = Qinv(index[f], j);
  return v;
}

uint64_t span_order(const std::vector<std::vector<uint64_t>>& rows, size_t r, const ZMod& R) {
  if (rows.empty() || r == 0) return 1;
  Mat M(rows.size(), r);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < r; ++j) M(i, j) = rows[i][j] % R.N;
  SNF s = smith_normal_form(M, R, false, false);
  uint64_t o = 1;
  for (size_t i = 0; i < s.rank; ++i) o *= R.ppow(R.k - s.vals[i]);
  return o;
}

SubmoduleCoords submodule_coords(const std::vector<std::vector<uint64_t>>& rows, size_t r, const ZMod& R) {
  SubmoduleCoords sc;
  sc.R = R;
  Mat M(rows.size(), r);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < r; ++j) M(i, j) = rows[i][j] % R.N;
  SNF s = smith_normal_form(M, R, true, true);
  for (size_t i = 0; i < s.rank; ++i) {
    sc.orders.push_back(R.ppow(R.k - s.vals[i]));
    sc.divisors.push_back(R.ppow(s.vals[i]));
    sc.index.push_back(i);
  }
  sc.Q = std::move(s.Q);
  sc.Qinv = std::move(s.Qinv);
  sc.P = std::move(s.P);
  return sc;
}

std::vector<uint64_t> SubmoduleCoords::coords(const std::vector<uint64_t>& x) const {
  std::vector<uint64_t> c(orders.size());
  for (size_t f = 0; f < orders.size(); ++f) {
    size_t col = index[f];
    uint64_t acc = 0;
    for (size_t j = 0; j < x.size(); ++j)
      if (x[j]) acc = R.add(acc, R.mul(x[j] % R.N, Q(j, col)));
    require(acc % divisors[f] == 0, Err::InvalidArgument, "vector is not in the submodule");
    c[f] = (acc / divisors[f]) % orders[f];
  }
  return c;
}

std::vector<uint64_t> SubmoduleCoords::basis_vector(size_t f) const {
  std::vector<uint64_t> v(Qinv.cols);
  for (size_t j = 0; j < Qinv.cols; ++j) v[j] = R.mul(divisors[f], Qinv(index[f], j));
  return v;
}

std::vector<uint64_t> SubmoduleCoords::preimage(size_t f) const {
  std::vector<uint64_t> v(P.cols);
  for (size_t j = 0; j < P.cols; ++j) v[j] = P(index[f], j);
  return v;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> ps;
  for (uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

AbelianSubgroupData abelian_subgroup_structure(const FiniteGroup& G, const Subgroup& A) {
  AbelianSubgroupData d;
  d.group = &G;
  d.members = A;
  std::sort(d.members.begin(), d.members.end());
  for (Elt a : d.members)
    for (Elt b : d.members)
      if (G.mul(a, b) != G.mul(b, a)) fail(Err::InvalidArgument, "subgroup is not abelian");
  std::vector<uint64_t> factors;
  std::vector<Elt> basis;
  for (uint64_t p : prime_factors(A.size())) {
    std::vector<Elt> part;
    for (Elt a : d.members) {
      uint64_t o = G.elem_order(a);
      while (o % p == 0) o /= p;
      if (o == 1) part.push_back(a);
    }
    std::vector<char> inS(G.order(), 0);
    inS[G.id()] = 1;
    std::vector<Elt> S{G.id()};
    std::vector<Elt> pb;
    std::vector<uint64_t> pf;
    while (S.size() < part.size()) {
      Elt besty = 0;
      uint64_t beste = 0;
      for (Elt y : part) {
        if (inS[y]) continue;
        uint64_t e = 1;
        Elt z = y;
        while (!inS[z]) {
          z = G.pow(z, static_cast<int64_t>(p));
          e *= p;
        }
        if (e > beste) {
          beste = e;
          besty = y;
        }
      }
      Elt s = G.pow(besty, static_cast<int64_t>(beste));
      Elt root = G.id();
      bool found = false;
      for (Elt c : S)
        if (G.pow(c, static_cast<int64_t>(beste)) == s) {
          root = c;
          found = true;
          break;
        }
      require(found, Err::Internal, "abelian basis construction failed");
      Elt y = G.mul(besty, G.inv(root));
      pb.push_back(y);
      pf.push_back(beste);
      std::vector<Elt> gens = pb;
      S = generated_subgroup(G, gens);
      std::fill(inS.begin(), inS.end(), 0);
      for (Elt x : S) inS[x] = 1;
    }
    // Ascending factor order within the prime.
    std::vector<size_t> idx(pb.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return pf[a] < pf[b]; });
    for (size_t i : idx) {
      basis.push_back(pb[i]);
      factors.push_back(pf[i]);
    }
  }
  d.structure.factors = factors;
  d.basis = basis;
  d.coords.assign(d.members.size(), {});
  std::vector<uint64_t> c(factors.size(), 0);
  uint64_t total = d.structure.order();
  require(total == d.members.size(), Err::Internal, "abelian basis does not span");
  for (uint64_t it = 0; it < total; ++it) {
    Elt x = G.id();
    for (size_t i = 0; i < c.size(); ++i) x = G.mul(x, G.pow(basis[i], static_cast<int64_t>(c[i])));
    auto pos = std::lower_bound(d.members.begin(), d.members.end(), x) - d.members.begin();
    d.coords[pos] = c;
    for (size_t i = 0; i < c.size(); ++i) {
      if (++c[i] < factors[i]) break;
      c[i] = 0;
    }
  }
  return d;
}

std::vector<uint64_t> AbelianSubgroupData::coords_of(Elt x) const {
  auto it = std::lower_bound(members.begin(), members.end(), x);
  require(it != members.end() && *it == x, Err::InvalidArgument, "element is not in the abelian subgroup");
  return coords[it - members.begin()];
}

Elt AbelianSubgroupData::element_of(const std::vector<uint64_t>& c) const {
  Elt x = group->id();
  for (size_t i = 0; i < basis.size(); ++i)
    x = group->mul(x, group->pow(basis[i], static_cast<int64_t>(c[i] % structure.factors[i])));
  return x;
}

}  // namespace cll
