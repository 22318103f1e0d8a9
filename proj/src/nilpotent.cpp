#include "cll/nilpotent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cll {

// ---------------------------------------------------------------- words

namespace {

struct WordParser {
  const std::string& s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void error(const std::string& what) {
    fail(Err::ParseError, "word parse error at position " + std::to_string(pos) + ": " + what);
  }
  int64_t integer() {
    skip();
    bool neg = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) neg = s[pos++] == '-';
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) error("expected integer");
    int64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos++] - '0');
      if (v > 1000000) error("integer too large");
    }
    return neg ? -v : v;
  }
  Word atom() {
    skip();
    if (pos >= s.size()) error("unexpected end");
    char c = s[pos];
    if (c == 'x' || c == 'X') {
      ++pos;
      int64_t k = integer();
      if (k < 1) error("generator index must be >= 1");
      return {Letter{static_cast<uint32_t>(k - 1), 1}};
    }
    if (c == '~') {
      ++pos;
      return inverse_word(atom());
    }
    if (c == '[') {
      ++pos;
      Word a = word(',');
      skip();
      if (pos >= s.size() || s[pos] != ',') error("expected ','");
      ++pos;
      Word b = word(']');
      skip();
      if (pos >= s.size() || s[pos] != ']') error("expected ']'");
      ++pos;
      Word out = inverse_word(a);
      Word bi = inverse_word(b);
      out.insert(out.end(), bi.begin(), bi.end());
      out.insert(out.end(), a.begin(), a.end());
      out.insert(out.end(), b.begin(), b.end());
      return out;
    }
    if (c == '(') {
      ++pos;
      Word a = word(')');
      skip();
      if (pos >= s.size() || s[pos] != ')') error("expected ')'");
      ++pos;
      return a;
    }
    error(std::string("unexpected character '") + c + "'");
  }
  Word factor() {
    Word a = atom();
    skip();
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      int64_t k = integer();
      Word base = k < 0 ? inverse_word(a) : a;
      Word out;
      for (int64_t i = 0; i < std::abs(k); ++i) out.insert(out.end(), base.begin(), base.end());
      return out;
    }
    return a;
  }
  Word word(char stop) {
    Word out;
    while (true) {
      skip();
      if (pos >= s.size() || s[pos] == stop || s[pos] == ',' || s[pos] == ']' || s[pos] == ')') break;
      Word f = factor();
      out.insert(out.end(), f.begin(), f.end());
    }
    return out;
  }
};

}  // namespace

Word parse_word(const std::string& text) {
  WordParser p{text};
  Word w = p.word('\0');
  p.skip();
  if (p.pos != text.size()) p.error("trailing characters");
  return w;
}

std::string word_to_string(const Word& w) {
  std::ostringstream os;
  for (const auto& l : w) {
    if (l.sign < 0) os << '~';
    os << 'x' << (l.gen + 1);
  }
  return os.str();
}

Word inverse_word(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& l : r) l.sign = -l.sign;
  return r;
}

Word standard_relator(int n) {
  Word w;
  for (int i = 0; i < n; ++i) {
    uint32_t a = 2 * i, b = 2 * i + 1;
    w.push_back({a, -1});
    w.push_back({b, -1});
    w.push_back({a, 1});
    w.push_back({b, 1});
  }
  return w;
}

Word all_inverses_relator(int m) {
  Word w;
  for (int i = 0; i < m; ++i) w.push_back({static_cast<uint32_t>(i), -1});
  for (int i = 0; i < m; ++i) w.push_back({static_cast<uint32_t>(i), 1});
  return w;
}

Elt eval_word(const FiniteGroup& G, const std::vector<Elt>& images, const Word& w) {
  Elt r = G.id();
  for (const auto& l : w) {
    require(l.gen < images.size(), Err::BadIndex, "word letter out of range");
    r = G.mul(r, l.sign > 0 ? images[l.gen] : G.inv(images[l.gen]));
  }
  return r;
}

// ---------------------------------------------------------------- free nilpotent Lie ring

namespace {
bool is_prime_u32(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}
}  // namespace

FreeNilpotent::FreeNilpotent(int m, int cls, uint32_t ell) : m_(m), cls_(cls) {
  require(m >= 1 && m <= 64, Err::InvalidArgument, "number of generators out of range");
  require(cls == 2 || cls == 3, Err::InvalidArgument, "class must be 2 or 3");
  require(is_prime_u32(ell) && ell % 2 == 1, Err::BadPrimeForClass, "l must be an odd prime");
  require(cls == 2 || ell >= 5, Err::BadPrimeForClass, "class 3 needs l >= 5");
  F_ = Fp(ell);
  d1_ = m;
  pidx_.assign(static_cast<size_t>(m) * m, -1);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      pidx_[i * m + j] = static_cast<int>(pairs_.size());
      pairs_.push_back({i, j});
    }
  d2_ = pairs_.size();
  d3_ = 0;
  if (cls == 3) {
    tidx_.assign(d2_ * m, -1);
    for (size_t p = 0; p < d2_; ++p)
      for (int k = pairs_[p].first; k < m; ++k) {
        tidx_[p * m + k] = static_cast<int>(triples_.size());
        triples_.push_back({pairs_[p].first, pairs_[p].second, k});
      }
    d3_ = triples_.size();
    br21_.assign(d2_ * m, {});
    const uint32_t off = static_cast<uint32_t>(d1_ + d2_);
    for (size_t p = 0; p < d2_; ++p) {
      auto [i, j] = pairs_[p];
      for (int k = 0; k < m; ++k) {
        auto& out = br21_[p * m + k];
        if (k >= i) {
          out.push_back({off + static_cast<uint32_t>(tidx_[p * m + k]), 1});
        } else {
          // [[e_i,e_j],e_k] = [[e_k,e_j],e_i] - [[e_k,e_i],e_j]
          size_t pkj = pidx_[k * m + j], pki = pidx_[k * m + i];
          out.push_back({off + static_cast<uint32_t>(tidx_[pkj * m + i]), 1});
          out.push_back({off + static_cast<uint32_t>(tidx_[pki * m + j]), ell - 1});
        }
      }
    }
  }
  half_ = F_.inv(2);
  twelfth_ = cls == 3 ? F_.inv(12 % ell) : 0;
  comm2_.resize(d2_);
  for (size_t p = 0; p < d2_; ++p) comm2_[p] = comm(gen(pairs_[p].first), gen(pairs_[p].second));
}

size_t FreeNilpotent::idx2(int i, int j) const {
  require(i < j && j < m_, Err::BadIndex, "pair index out of range");
  return d1_ + pidx_[i * m_ + j];
}

size_t FreeNilpotent::idx3(int i, int j, int k) const {
  require(cls_ == 3 && i < j && j < m_ && k >= i && k < m_, Err::BadIndex, "triple index out of range");
  return d1_ + d2_ + tidx_[static_cast<size_t>(pidx_[i * m_ + j]) * m_ + k];
}

std::string FreeNilpotent::basis_label(size_t idx) const {
  if (idx < d1_) return "x" + std::to_string(idx + 1);
  if (idx < d1_ + d2_) {
    auto [i, j] = pairs_[idx - d1_];
    return "[x" + std::to_string(i + 1) + ",x" + std::to_string(j + 1) + "]";
  }
  auto t = triples_[idx - d1_ - d2_];
  return "[[x" + std::to_string(t.i + 1) + ",x" + std::to_string(t.j + 1) + "],x" + std::to_string(t.k + 1) + "]";
}

FVec FreeNilpotent::gen(int i) const {
  require(i >= 0 && i < m_, Err::BadIndex, "generator index out of range");
  FVec v = zero();
  v[i] = 1;
  return v;
}

FVec FreeNilpotent::add(const FVec& a, const FVec& b) const {
  FVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F_.add(a[i], b[i]);
  return r;
}

FVec FreeNilpotent::sub(const FVec& a, const FVec& b) const {
  FVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F_.sub(a[i], b[i]);
  return r;
}

FVec FreeNilpotent::scale(const FVec& a, uint32_t c) const {
  FVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F_.mul(a[i], c);
  return r;
}

FVec FreeNilpotent::bracket(const FVec& a, const FVec& b) const {
  FVec r = zero();
  const uint32_t p = F_.p;
  for (size_t q = 0; q < d2_; ++q) {
    auto [i, j] = pairs_[q];
    r[d1_ + q] = (a[i] * b[j] + (p - (a[j] * b[i]) % p)) % p;
  }
  if (cls_ == 3) {
    for (size_t q = 0; q < d2_; ++q) {
      uint32_t a2 = a[d1_ + q], b2 = b[d1_ + q];
      if (!a2 && !b2) continue;
      for (int k = 0; k < m_; ++k) {
        // [a2, b1] - [b2, a1]
        uint32_t c = (a2 * b[k] + (p - (b2 * a[k]) % p)) % p;
        if (!c) continue;
        for (auto [idx, coef] : br21_[q * m_ + k]) r[idx] = (r[idx] + c * coef) % p;
      }
    }
  }
  return r;
}

FVec FreeNilpotent::mul(const FVec& a, const FVec& b) const {
  FVec c = bracket(a, b);
  FVec r(a.size());
  const uint32_t p = F_.p;
  for (size_t i = 0; i < r.size(); ++i) r[i] = (a[i] + b[i] + half_ * c[i]) % p;
  if (cls_ == 3) {
    // (1/12)([a,[a,b]] + [b,[b,a]]) = (1/12)[[a,b], b - a]
    FVec d = bracket(c, sub(b, a));
    for (size_t i = d1_ + d2_; i < r.size(); ++i) r[i] = (r[i] + twelfth_ * d[i]) % p;
  }
  return r;
}

FVec FreeNilpotent::comm(const FVec& a, const FVec& b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

FVec FreeNilpotent::conj(const FVec& a, const FVec& u) const { return mul(mul(u, a), inv(u)); }

FVec FreeNilpotent::eval(const Word& w) const {
  FVec r = zero();
  for (const auto& l : w) {
    require(static_cast<int>(l.gen) < m_, Err::BadIndex, "word letter out of range");
    FVec g = gen(static_cast<int>(l.gen));
    r = mul(r, l.sign > 0 ? g : inv(g));
  }
  return r;
}

FreeNilpotent::Malcev FreeNilpotent::malcev(const FVec& g) const {
  Malcev mc;
  FVec y = zero();
  for (size_t i = 0; i < d1_; ++i)
    if (g[i]) {
      mc.d1.push_back({static_cast<uint32_t>(i), g[i]});
      y = mul(y, scale(gen(static_cast<int>(i)), g[i]));
    }
  FVec r = mul(inv(y), g);
  FVec y2 = zero();
  for (size_t q = 0; q < d2_; ++q)
    if (r[d1_ + q]) {
      mc.d2.push_back({static_cast<uint32_t>(q), r[d1_ + q]});
      y2 = mul(y2, scale(comm2_[q], r[d1_ + q]));
    }
  if (cls_ == 3) {
    FVec r2 = mul(inv(y2), r);
    for (size_t t = 0; t < d3_; ++t)
      if (r2[d1_ + d2_ + t]) mc.d3.push_back({static_cast<uint32_t>(t), r2[d1_ + d2_ + t]});
  }
  return mc;
}

Elt FreeNilpotent::eval_malcev(const FiniteGroup& H, const std::vector<Elt>& im, const Malcev& mc) const {
  Elt r = H.id();
  for (auto [i, e] : mc.d1) r = H.mul(r, H.pow(im[i], e));
  for (auto [q, e] : mc.d2) {
    auto [i, j] = pairs_[q];
    r = H.mul(r, H.pow(H.comm(im[i], im[j]), e));
  }
  for (auto [t, e] : mc.d3) {
    const auto& tr = triples_[t];
    r = H.mul(r, H.pow(H.comm(H.comm(im[tr.i], im[tr.j]), im[tr.k]), e));
  }
  return r;
}

Elt FreeNilpotent::eval_in(const FiniteGroup& H, const std::vector<Elt>& images, const FVec& g) const {
  return eval_malcev(H, images, malcev(g));
}

FMat relator_matrix(const FreeNilpotent& F, const FVec& central) {
  for (size_t i = 0; i < F.dim1(); ++i)
    require(central[i] == 0, Err::NotInCommutatorPart, "relator has nonzero degree-1 part");
  const int m = F.num_gens();
  const Fp& f = F.field();
  FMat M(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      uint32_t a = central[F.idx2(i, j)];
      M(i, j) = f.neg(a);
      M(j, i) = a;
    }
  return M;
}

// ---------------------------------------------------------------- Demushkin truncation

DemushkinTrunc::DemushkinTrunc(int n, uint32_t ell, int cls, RelatorKind kind) : n_(n), kind_(kind) {
  require(n >= 1, Err::InvalidArgument, "n must be >= 1");
  F_ = std::make_shared<const FreeNilpotent>(2 * n, cls, ell);
  const FreeNilpotent& F = *F_;
  relator_ = kind == RelatorKind::Standard ? standard_relator(n) : all_inverses_relator(2 * n);
  lambda_ = F.eval(relator_);
  K_ = Echelon(&F.field(), F.dim());
  if (cls == 3) {
    FVec l2 = F.zero();
    for (size_t i = F.dim1(); i < F.dim1() + F.dim2(); ++i) l2[i] = lambda_[i];
    for (int j = 0; j < 2 * n; ++j) K_.insert(F.bracket(l2, F.gen(j)));
  }
  xi_ = reduce(lambda_);
  bool nz = false;
  for (auto x : xi_) nz |= x != 0;
  require(nz, Err::Internal, "relator vanishes in the truncation");
  KX_ = K_;
  KX_.insert(xi_);
  const int m = 2 * n;
  J_ = FMat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      uint32_t a = lambda_[F.idx2(i, j)];
      J_(i, j) = a;
      J_(j, i) = F.field().neg(a);
    }
  sigma_ = FMat(F.dim(), F.dim());
  for (size_t i = 0; i < F.dim(); ++i) sigma_(i, i) = F.degree(i) == 2 ? 1 : ell - 1;
}

FVec DemushkinTrunc::sigma(const FVec& v) const {
  if (sigma_standard_) {
    FVec r = v;
    const Fp& f = field();
    for (size_t i = 0; i < r.size(); ++i)
      if (F_->degree(i) != 2) r[i] = f.neg(r[i]);
    return reduce(std::move(r));
  }
  return reduce(mat_vec(field(), sigma_, v));
}

void DemushkinTrunc::set_sigma(const FMat& s) {
  const FreeNilpotent& F = *F_;
  const Fp& f = field();
  require(s.rows == F.dim() && s.cols == F.dim(), Err::InvalidAction, "sigma matrix has wrong shape");
  auto apply = [&](const FVec& v) { return reduce(mat_vec(f, s, v)); };
  for (size_t b = 0; b < F.dim(); ++b) {
    FVec e = F.zero();
    e[b] = 1;
    require(apply(apply(e)) == reduce(e), Err::InvalidAction, "sigma is not an involution");
  }
  for (const auto& r : K_.rows()) require(apply(r) == F.zero(), Err::InvalidAction, "sigma does not preserve K");
  require(apply(xi_) == xi_, Err::InvalidAction, "sigma does not fix xi");
  for (int i = 0; i < F.num_gens(); ++i)
    for (int j = 0; j < F.num_gens(); ++j) {
      FVec a = F.gen(i), b = F.gen(j);
      require(apply(F.bracket(a, b)) == reduce(F.bracket(apply(a), apply(b))), Err::InvalidAction,
              "sigma is not a Lie automorphism");
    }
  sigma_ = s;
  sigma_standard_ = false;
}

void DemushkinTrunc::set_sigma_conjugate(const FMat& tau) {
  const Fp& f = field();
  FMat ti;
  require(tau.rows == F_->dim() && tau.cols == F_->dim() && mat_inverse(f, tau, ti), Err::InvalidAction,
          "conjugator is not invertible");
  FMat s0(F_->dim(), F_->dim());
  for (size_t i = 0; i < F_->dim(); ++i) s0(i, i) = F_->degree(i) == 2 ? 1 : f.p - 1;
  set_sigma(mat_mul(f, ti, mat_mul(f, s0, tau)));
  tau_ = tau;
  tau_inv_ = ti;
}

// ---------------------------------------------------------------- automorphisms

FVec ConstrainedAut::apply_psi(const DemushkinTrunc& D, const FVec& v) const {
  return D.reduce(mat_vec(D.field(), psi, v));
}

FVec ConstrainedAut::apply(const DemushkinTrunc& D, const FVec& v) const {
  return D.reduce(D.free().conj(apply_psi(D, v), u));
}

namespace {

FMat lie_map_from_images(const FreeNilpotent& F, const std::vector<FVec>& img) {
  const size_t dim = F.dim();
  FMat P(dim, dim);
  for (size_t b = 0; b < dim; ++b) {
    FVec col;
    int deg = F.degree(b);
    if (deg == 1) {
      col = img[b];
    } else if (deg == 2) {
      auto [i, j] = F.pair_of(b);
      col = F.bracket(img[i], img[j]);
    } else {
      auto t = F.triple_of(b);
      col = F.bracket(F.bracket(img[t.i], img[t.j]), img[t.k]);
    }
    P.set_col(b, col);
  }
  return P;
}

}  // namespace

ConstrainedAut make_aut(const DemushkinTrunc& D, uint32_t q, const std::vector<FVec>& gen_images, const FVec& u) {
  const FreeNilpotent& F = D.free();
  const int m = D.m();
  require(static_cast<int>(gen_images.size()) == m, Err::InvalidArgument, "need one image per generator");
  ConstrainedAut a;
  a.q = q % F.ell();
  a.T = FMat(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) a.T(k, i) = gen_images[i][k];
  a.psi = lie_map_from_images(F, gen_images);
  a.u = D.reduce(u);
  a.t = D.reduce(F.mul(a.u, F.inv(D.sigma(a.u))));
  a.gen_images.resize(m);
  for (int i = 0; i < m; ++i) a.gen_images[i] = a.apply(D, F.gen(i));
  return a;
}

void verify_aut(const DemushkinTrunc& D, const ConstrainedAut& a, bool check_gamma) {
  const FreeNilpotent& F = D.free();
  const Fp& f = D.field();
  const int m = D.m();
  FMat Tinv;
  require(mat_inverse(f, a.T, Tinv), Err::VerificationFailed, "automorphism is not surjective on generators");
  for (const auto& r : D.kernel_span().rows())
    require(a.apply_psi(D, r) == F.zero(), Err::VerificationFailed, "automorphism does not preserve K");
  require(a.apply(D, D.xi()) == D.reduce(F.scale(D.xi(), a.q)), Err::VerificationFailed,
          "automorphism does not act by q on xi");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      FVec x = F.gen(i), y = F.gen(j);
      FVec lhs = a.apply(D, F.mul(x, y));
      FVec rhs = D.mul(a.apply(D, x), a.apply(D, y));
      require(lhs == rhs, Err::VerificationFailed, "automorphism is not multiplicative");
    }
  if (check_gamma) {
    require(D.mul(a.t, D.sigma(a.t)) == F.zero(), Err::VerificationFailed, "image of s is not an involution");
    FVec tinv = F.inv(a.t);
    for (int i = 0; i < m; ++i) {
      FVec x = F.gen(i);
      FVec lhs = a.apply(D, D.sigma(x));
      FVec rhs = D.reduce(F.mul(F.mul(a.t, D.sigma(a.apply(D, x))), tinv));
      require(lhs == rhs, Err::VerificationFailed, "automorphism is not compatible with the Gamma action");
    }
  }
}

uint32_t beta(const Fp& F, const FMat& J, const FVec& x, const FVec& y) {
  uint64_t acc = 0;
  for (size_t i = 0; i < J.rows; ++i) {
    if (!x[i]) continue;
    uint64_t row = 0;
    for (size_t j = 0; j < J.cols; ++j) row += static_cast<uint64_t>(J(i, j)) * y[j];
    acc += x[i] * (row % F.p);
  }
  return static_cast<uint32_t>(acc % F.p);
}

namespace {

// Symplectic basis (e1, f1, e2, f2, ...) of span(basis) with beta(e, f) = scale.
std::vector<FVec> symplectic_basis_of(const Fp& F, const FMat& J, std::vector<FVec> basis, uint32_t scale) {
  std::vector<FVec> out;
  const uint32_t sinv = F.inv(scale);
  while (!basis.empty()) {
    FVec e = basis[0];
    size_t k = 1;
    while (k < basis.size() && beta(F, J, e, basis[k]) == 0) ++k;
    require(k < basis.size(), Err::InconsistentPrescription, "degenerate complement");
    FVec f(e.size(), 0);
    F.axpy(f, F.mul(scale, F.inv(beta(F, J, e, basis[k]))), basis[k]);
    std::vector<FVec> rest;
    for (size_t i = 1; i < basis.size(); ++i) {
      if (i == k) continue;
      FVec w = basis[i];
      uint32_t bwe = beta(F, J, w, e), bwf = beta(F, J, w, f);
      F.axpy(w, F.mul(bwe, sinv), f);
      F.axpy(w, F.neg(F.mul(bwf, sinv)), e);
      rest.push_back(std::move(w));
    }
    out.push_back(e);
    out.push_back(f);
    basis = std::move(rest);
  }
  return out;
}

FMat rows_times_J(const Fp& F, const FMat& J, const std::vector<FVec>& vs) {
  FMat A(vs.size(), J.cols);
  for (size_t r = 0; r < vs.size(); ++r)
    for (size_t j = 0; j < J.cols; ++j) {
      uint64_t acc = 0;
      for (size_t i = 0; i < J.rows; ++i) acc += static_cast<uint64_t>(vs[r][i]) * J(i, j);
      A(r, j) = static_cast<uint32_t>(acc % F.p);
    }
  return A;
}

}  // namespace

FMat symplectic_completion(const Fp& F, const FMat& J, const std::vector<FVec>& partial, uint32_t scale) {
  const size_t N = J.rows;
  require(scale % F.p != 0, Err::InconsistentPrescription, "scale must be a unit");
  {
    Echelon E(&F, N);
    for (const auto& p : partial) {
      require(p.size() == N, Err::InconsistentPrescription, "partial vector has wrong length");
      require(E.insert(p), Err::InconsistentPrescription, "partial vectors are dependent");
    }
  }
  const size_t k = partial.size();
  FMat G(k, k);
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) G(i, j) = beta(F, J, partial[i], partial[j]);
  AffineSolution rad;
  solve_affine(F, G, FVec(k, 0), rad);
  const size_t r = rad.kernel.size();
  FMat C(r, k);
  for (size_t b = 0; b < r; ++b)
    for (size_t i = 0; i < k; ++i) C(b, i) = rad.kernel[b][i];
  std::vector<FVec> vs;
  for (size_t a = 0; a < r; ++a) {
    FVec ea(r, 0);
    ea[a] = 1;
    AffineSolution ys;
    require(solve_affine(F, C, ea, ys), Err::Internal, "radical dual system inconsistent");
    // beta(p_i, v) = scale * y_i and beta(v_b, v) = 0 for b < a.
    std::vector<FVec> lhs = partial;
    lhs.insert(lhs.end(), vs.begin(), vs.end());
    FMat A = rows_times_J(F, J, lhs);
    FVec rhs(lhs.size(), 0);
    for (size_t i = 0; i < k; ++i) rhs[i] = F.mul(scale, ys.particular[i]);
    AffineSolution vsol;
    require(solve_affine(F, A, rhs, vsol), Err::InconsistentPrescription, "cannot find radical partner");
    vs.push_back(vsol.particular);
  }
  std::vector<FVec> W = partial;
  W.insert(W.end(), vs.begin(), vs.end());
  AffineSolution perp;
  if (W.empty()) {
    for (size_t i = 0; i < N; ++i) {
      FVec e(N, 0);
      e[i] = 1;
      perp.kernel.push_back(e);
    }
  } else {
    solve_affine(F, rows_times_J(F, J, W), FVec(W.size(), 0), perp);
  }
  std::vector<FVec> comp = symplectic_basis_of(F, J, perp.kernel, scale);
  FMat B(N, N);
  size_t c = 0;
  for (const auto& v : W) B.set_col(c++, v);
  for (const auto& v : comp) B.set_col(c++, v);
  require(c == N, Err::InconsistentPrescription, "completion has wrong size");
  require(mat_rank(F, B) == N, Err::InconsistentPrescription, "completion is not a basis");
  return B;
}

FMat q_symplectic_completion(const Fp& F, const FMat& J, const std::vector<FVec>& partial, const FMat& prescribed,
                             uint32_t scale) {
  require(prescribed.rows == partial.size() && prescribed.cols == partial.size(), Err::InconsistentPrescription,
          "prescribed pairing matrix has wrong shape");
  for (size_t i = 0; i < partial.size(); ++i)
    for (size_t j = 0; j < partial.size(); ++j)
      require(beta(F, J, partial[i], partial[j]) == prescribed(i, j) % F.p, Err::InconsistentPrescription,
              "partial vectors do not have the prescribed pairings");
  return symplectic_completion(F, J, partial, scale);
}

FMat sample_similitude(const Fp& F, const FMat& J, uint32_t q, std::mt19937_64& rng) {
  const size_t N = J.rows;
  q %= F.p;
  require(q != 0, Err::InvalidArgument, "multiplier must be a unit");
  FMat B = symplectic_completion(F, J, {}, 1);
  FMat Binv;
  require(mat_inverse(F, B, Binv), Err::Internal, "canonical basis not invertible");
  std::vector<FVec> W;
  for (size_t i = 0; i < N; ++i) {
    FVec e(N, 0);
    e[i] = 1;
    W.push_back(e);
  }
  FMat C(N, N);
  size_t col = 0;
  while (!W.empty()) {
    FVec e;
    while (true) {
      e.assign(N, 0);
      for (const auto& w : W) F.axpy(e, static_cast<uint32_t>(rng() % F.p), w);
      bool nz = false;
      for (auto x : e) nz |= x != 0;
      if (nz) break;
    }
    std::vector<uint32_t> be(W.size());
    size_t k = W.size();
    for (size_t i = 0; i < W.size(); ++i) {
      be[i] = beta(F, J, e, W[i]);
      if (be[i] && k == W.size()) k = i;
    }
    require(k < W.size(), Err::Internal, "degenerate subspace in symplectic sampling");
    FVec y(W.size());
    uint32_t acc = 0;
    for (size_t i = 0; i < W.size(); ++i) {
      if (i == k) continue;
      y[i] = static_cast<uint32_t>(rng() % F.p);
      acc = F.add(acc, F.mul(y[i], be[i]));
    }
    y[k] = F.mul(F.sub(1, acc), F.inv(be[k]));
    FVec f(N, 0);
    for (size_t i = 0; i < W.size(); ++i) F.axpy(f, y[i], W[i]);
    Echelon E(&F, N);
    std::vector<FVec> rest;
    for (const auto& w0 : W) {
      FVec w = w0;
      uint32_t bwe = beta(F, J, w, e), bwf = beta(F, J, w, f);
      F.axpy(w, bwe, f);
      F.axpy(w, F.neg(bwf), e);
      if (E.insert(w)) rest.push_back(std::move(w));
    }
    C.set_col(col++, e);
    FVec fq(N, 0);
    F.axpy(fq, q, f);
    C.set_col(col++, fq);
    W = std::move(rest);
  }
  return mat_mul(F, C, Binv);
}

std::vector<FMat> enumerate_similitudes(const Fp& F, const FMat& J, uint32_t q) {
  const size_t N = J.rows;
  double total = 1;
  for (size_t i = 0; i < N * N; ++i) total *= F.p;
  require(total <= 2e6, Err::CapExceeded, "similitude enumeration too large");
  std::vector<FMat> out;
  FMat M(N, N);
  FMat Jq = J;
  for (auto& x : Jq.a) x = F.mul(x, q % F.p);
  const size_t cells = N * N;
  std::vector<uint32_t> digits(cells, 0);
  while (true) {
    M.a = digits;
    if (mat_mul(F, mat_mul(F, M.transpose(), J), M) == Jq) out.push_back(M);
    size_t p = 0;
    while (p < cells && ++digits[p] == F.p) digits[p++] = 0;
    if (p == cells) break;
  }
  return out;
}

ConstrainedAut gamma_aut_from_params(const DemushkinTrunc& D, uint32_t q, const FMat& M, const std::vector<FVec>& d,
                                     const FVec& u) {
  const FreeNilpotent& F = D.free();
  const int m = D.m();
  std::vector<FVec> img(m);
  for (int i = 0; i < m; ++i) {
    FVec v = F.zero();
    for (int k = 0; k < m; ++k) v[k] = M(i, k);  // T = M^T, column i of T
    if (!d.empty()) v = F.add(v, d[i]);
    img[i] = v;
  }
  return make_aut(D, q, img, u);
}

ConstrainedAut sample_constrained_aut(const DemushkinTrunc& D, uint32_t q, std::mt19937_64& rng, bool verify) {
  const FreeNilpotent& F = D.free();
  const Fp& f = D.field();
  require(q % f.p != 0, Err::QNotCoprime, "q must be prime to l");
  FMat M = sample_similitude(f, D.form(), q, rng);
  std::vector<FVec> d;
  if (F.nil_class() == 3) {
    d.resize(D.m());
    for (auto& v : d) {
      v = F.zero();
      for (size_t i = F.dim1() + F.dim2(); i < F.dim(); ++i) v[i] = static_cast<uint32_t>(rng() % f.p);
      v = D.reduce(v);
    }
  }
  FVec u = D.reduce(random_vector(f, F.dim(), rng));
  ConstrainedAut a;
  if (D.sigma_is_standard()) {
    a = gamma_aut_from_params(D, q, M, d, u);
  } else {
    // Transport a sample for the standard involution through the conjugator.
    require(D.has_conjugator(), Err::InvalidAction, "sampling needs sigma given by a conjugator");
    const int m = D.m();
    std::vector<FVec> img(m);
    for (int i = 0; i < m; ++i) {
      img[i] = F.zero();
      for (int k = 0; k < m; ++k) img[i][k] = M(i, k);
      if (!d.empty()) img[i] = F.add(img[i], d[i]);
    }
    FMat P = lie_map_from_images(F, img);
    const FMat& tau = D.conjugator();
    const FMat& ti = D.conjugator_inverse();
    std::vector<FVec> img2(m);
    for (int i = 0; i < m; ++i) img2[i] = D.reduce(mat_vec(f, ti, mat_vec(f, P, tau.col(i))));
    a = make_aut(D, q, img2, D.reduce(mat_vec(f, ti, u)));
  }
  if (verify) verify_aut(D, a, true);
  return a;
}

ConstrainedAut sample_plain_aut(const DemushkinTrunc& D, std::mt19937_64& rng, bool verify) {
  const FreeNilpotent& F = D.free();
  const Fp& f = D.field();
  const int m = D.m();
  FMat M = sample_similitude(f, D.form(), 1, rng);
  std::vector<FVec> base(m);
  for (int i = 0; i < m; ++i) {
    base[i] = F.zero();
    for (int k = 0; k < m; ++k) base[i][k] = M(i, k);
  }
  const size_t o2 = F.dim1(), o3 = F.dim1() + F.dim2();
  std::vector<FVec> img = base;
  if (F.nil_class() == 2) {
    for (auto& v : img)
      for (size_t i = o2; i < o3; ++i) v[i] = static_cast<uint32_t>(rng() % f.p);
  } else {
    // Degree-2 corrections must keep xi fixed modulo K: an affine condition.
    const size_t nv = static_cast<size_t>(m) * F.dim2();
    auto xi_image = [&](const FVec& cvars) {
      std::vector<FVec> im = base;
      for (int i = 0; i < m; ++i)
        for (size_t p = 0; p < F.dim2(); ++p) im[i][o2 + p] = cvars[i * F.dim2() + p];
      FMat P = lie_map_from_images(F, im);
      return D.reduce(mat_vec(f, P, D.xi()));
    };
    FVec zero(nv, 0);
    FVec f0 = xi_image(zero);
    FMat A(F.dim3(), nv);
    for (size_t v = 0; v < nv; ++v) {
      FVec cv(nv, 0);
      cv[v] = 1;
      FVec fv = xi_image(cv);
      for (size_t r = 0; r < F.dim3(); ++r) A(r, v) = f.sub(fv[o3 + r], f0[o3 + r]);
    }
    FVec rhs(F.dim3());
    for (size_t r = 0; r < F.dim3(); ++r) rhs[r] = f.sub(D.xi()[o3 + r], f0[o3 + r]);
    AffineSolution sol;
    require(solve_affine(f, A, rhs, sol), Err::VerificationFailed, "no degree-2 correction keeps xi fixed");
    FVec c = random_point(f, sol, rng);
    for (int i = 0; i < m; ++i) {
      for (size_t p = 0; p < F.dim2(); ++p) img[i][o2 + p] = c[i * F.dim2() + p];
      for (size_t t = o3; t < F.dim(); ++t) img[i][t] = static_cast<uint32_t>(rng() % f.p);
      img[i] = D.reduce(img[i]);
    }
  }
  ConstrainedAut a = make_aut(D, 1, img, F.zero());
  if (verify) verify_aut(D, a, false);
  return a;
}

// ---------------------------------------------------------------- pairing image

namespace {

struct Layer {
  QuotientResult q;
  size_t dim = 0;
  std::vector<int64_t> code;  // element of the quotient -> index into coords, -1 outside the layer
  std::vector<FVec> coords;
};

Layer bilinear_layer(GroupPtr T, uint64_t ell) {
  const FiniteGroup& G = *T;
  Subgroup T2 = commutator_subgroup(G);
  std::vector<Elt> seeds;
  for (Elt a : T2) {
    for (Elt g : G.gens()) seeds.push_back(G.comm(a, g));
    seeds.push_back(G.pow(a, static_cast<int64_t>(ell)));
  }
  Subgroup P = normal_closure(G, seeds);
  Layer L;
  L.q = quotient(T, P);
  const FiniteGroup& Q = *L.q.group;
  L.code.assign(Q.order(), -1);
  std::vector<Elt> basis;
  std::vector<Elt> members{Q.id()};
  L.code[Q.id()] = 0;
  L.coords.push_back(FVec{});
  for (Elt a : T2) {
    Elt x = L.q.proj(a);
    if (L.code[x] >= 0) continue;
    basis.push_back(x);
    for (auto& c : L.coords) c.push_back(0);
    std::vector<Elt> cur = members;
    std::vector<FVec> curc = L.coords;
    Elt px = Q.id();
    for (uint64_t k = 1; k < ell; ++k) {
      px = Q.mul(px, x);
      for (size_t i = 0; i < cur.size(); ++i) {
        Elt y = Q.mul(cur[i], px);
        require(L.code[y] < 0, Err::Internal, "layer is not elementary abelian");
        FVec c = curc[i];
        c.back() = static_cast<uint32_t>(k);
        L.code[y] = static_cast<int64_t>(L.coords.size());
        L.coords.push_back(std::move(c));
        members.push_back(y);
      }
    }
  }
  L.dim = basis.size();
  return L;
}

PairingImage assemble(GroupPtr T, const std::vector<Elt>& gens, std::vector<std::vector<int64_t>> b, uint64_t ell,
                      int n) {
  const FiniteGroup& G = *T;
  const size_t r = gens.size();
  PairingImage out;
  out.b = std::move(b);
  uint64_t N = 1;
  for (int i = 0; i < n; ++i) N *= ell;
  out.modulus = N;
  QuotientResult ab = quotient(T, commutator_subgroup(G));
  out.dual_log.resize(r);
  for (size_t i = 0; i < r; ++i) {
    uint64_t o = ab.group->elem_order(ab.proj(gens[i]));
    uint64_t e = 0, v = 1;
    while (v < o) {
      v *= ell;
      ++e;
    }
    require(v == o, Err::InvalidArgument, "generator image order is not a power of l");
    require(e <= static_cast<uint64_t>(n), Err::InvalidArgument, "l^n is smaller than a generator order");
    uint64_t d = 1;
    for (uint64_t k = e; k < static_cast<uint64_t>(n); ++k) d *= ell;
    out.dual_log[i] = d % N;
  }
  out.f.assign(r, std::vector<uint64_t>(r, 0));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) {
      if (i == j) continue;
      int64_t bij = i < j ? -out.b[i][j] : out.b[j][i];
      int64_t bm = ((bij % static_cast<int64_t>(N)) + static_cast<int64_t>(N)) % static_cast<int64_t>(N);
      unsigned __int128 v = static_cast<unsigned __int128>(bm) * out.dual_log[i] % N * out.dual_log[j] % N;
      out.f[i][j] = static_cast<uint64_t>(v);
    }
  return out;
}

void check_pairing_inputs(const FiniteGroup& G, const std::vector<Elt>& gens, Elt lambda) {
  require(generates(G, gens), Err::NotGenerating, "pairing generators do not generate");
  for (Elt g = 0; g < G.order(); ++g)
    require(G.mul(lambda, g) == G.mul(g, lambda), Err::NotCentral, "lambda is not central");
}

}  // namespace

PairingImage pairing_image(GroupPtr T, const std::vector<Elt>& gens, const Word& lambda, uint64_t ell, int n) {
  const FiniteGroup& G = *T;
  const size_t r = gens.size();
  Elt lam = eval_word(G, gens, lambda);
  check_pairing_inputs(G, gens, lam);
  std::vector<std::vector<int64_t>> b(r, std::vector<int64_t>(r, 0));
  if (r >= 2) {
    FreeNilpotent F(static_cast<int>(r), 2, static_cast<uint32_t>(ell));
    FVec v = F.eval(lambda);
    for (size_t i = 0; i < r; ++i)
      require(v[i] == 0, Err::NotInCommutatorPart, "lambda has nonzero exponent sums");
    for (size_t i = 0; i < r; ++i)
      for (size_t j = i + 1; j < r; ++j) b[i][j] = v[F.idx2(static_cast<int>(i), static_cast<int>(j))];
  }
  Layer L = bilinear_layer(T, ell);
  Elt prod = G.id();
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i + 1; j < r; ++j) prod = G.mul(prod, G.pow(G.comm(gens[i], gens[j]), b[i][j]));
  require(L.q.proj(prod) == L.q.proj(lam), Err::LayerSingular, "lambda is not the commutator product in the layer");
  return assemble(T, gens, std::move(b), ell, n);
}

PairingImage pairing_image_element(GroupPtr T, const std::vector<Elt>& gens, Elt lambda, uint64_t ell, int n) {
  const FiniteGroup& G = *T;
  const size_t r = gens.size();
  check_pairing_inputs(G, gens, lambda);
  Layer L = bilinear_layer(T, ell);
  Elt li = L.q.proj(lambda);
  require(L.code[li] >= 0, Err::NotInCommutatorPart, "lambda is not in the commutator subgroup");
  Fp f(static_cast<uint32_t>(ell));
  const size_t dimV = L.dim;
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i + 1; j < r; ++j) pairs.push_back({i, j});
  FMat A(dimV, pairs.size());
  for (size_t c = 0; c < pairs.size(); ++c) {
    const FVec& co = L.coords[L.code[L.q.proj(G.comm(gens[pairs[c].first], gens[pairs[c].second]))]];
    for (size_t k = 0; k < dimV; ++k) A(k, c) = co[k];
  }
  FVec rhs = L.coords[L.code[li]];
  AffineSolution sol;
  require(solve_affine(f, A, rhs, sol), Err::LayerSingular, "lambda is not a product of generator commutators");
  std::vector<std::vector<int64_t>> b(r, std::vector<int64_t>(r, 0));
  for (size_t c = 0; c < pairs.size(); ++c) b[pairs[c].first][pairs[c].second] = sol.particular[c];
  return assemble(T, gens, std::move(b), ell, n);
}

}  // namespace cll
