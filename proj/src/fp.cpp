#include "cll/fp.hpp"

#include "cll/errors.hpp"

namespace cll {

Fp::Fp(uint32_t prime) : p(prime), inv_table(prime, 0) {
  require(prime >= 2 && prime < 65536, Err::InvalidArgument, "field characteristic out of range");
  for (uint32_t a = 1; a < p; ++a)
    for (uint32_t b = 1; b < p; ++b)
      if ((a * b) % p == 1) {
        inv_table[a] = b;
        break;
      }
}

void Fp::axpy(FVec& y, uint32_t c, const FVec& x) const {
  if (c == 0) return;
  for (size_t i = 0; i < y.size(); ++i)
    if (x[i]) y[i] = (y[i] + c * x[i]) % p;
}

FMat FMat::identity(size_t n) {
  FMat I(n, n);
  for (size_t i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

FVec FMat::col(size_t j) const {
  FVec v(rows);
  for (size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
  return v;
}

void FMat::set_col(size_t j, const FVec& v) {
  for (size_t i = 0; i < rows; ++i) (*this)(i, j) = v[i];
}

FMat FMat::transpose() const {
  FMat t(cols, rows);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

FMat mat_mul(const Fp& F, const FMat& A, const FMat& B) {
  require(A.cols == B.rows, Err::InvalidArgument, "matrix shape mismatch");
  FMat C(A.rows, B.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t k = 0; k < A.cols; ++k) {
      uint32_t a = A(i, k);
      if (!a) continue;
      for (size_t j = 0; j < B.cols; ++j) C(i, j) = (C(i, j) + a * B(k, j)) % F.p;
    }
  return C;
}

FVec mat_vec(const Fp& F, const FMat& A, const FVec& x) {
  FVec y(A.rows, 0);
  for (size_t i = 0; i < A.rows; ++i) {
    uint64_t acc = 0;
    for (size_t j = 0; j < A.cols; ++j) acc += static_cast<uint64_t>(A(i, j)) * x[j];
    y[i] = static_cast<uint32_t>(acc % F.p);
  }
  return y;
}

bool mat_inverse(const Fp& F, const FMat& A, FMat& out) {
  const size_t n = A.rows;
  require(A.cols == n, Err::InvalidArgument, "inverse of non-square matrix");
  FMat M = A;
  out = FMat::identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t r = c;
    while (r < n && M(r, c) == 0) ++r;
    if (r == n) return false;
    if (r != c)
      for (size_t j = 0; j < n; ++j) {
        std::swap(M(r, j), M(c, j));
        std::swap(out(r, j), out(c, j));
      }
    uint32_t iv = F.inv(M(c, c));
    for (size_t j = 0; j < n; ++j) {
      M(c, j) = F.mul(M(c, j), iv);
      out(c, j) = F.mul(out(c, j), iv);
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || M(i, c) == 0) continue;
      uint32_t f = F.neg(M(i, c));
      for (size_t j = 0; j < n; ++j) {
        M(i, j) = (M(i, j) + f * M(c, j)) % F.p;
        out(i, j) = (out(i, j) + f * out(c, j)) % F.p;
      }
    }
  }
  return true;
}

size_t mat_rank(const Fp& F, const FMat& A) {
  Echelon E(&F, A.cols);
  for (size_t i = 0; i < A.rows; ++i) {
    FVec r(A.a.begin() + i * A.cols, A.a.begin() + (i + 1) * A.cols);
    E.insert(std::move(r));
  }
  return E.rank();
}

bool Echelon::reduce(FVec& v) const {
  bool zero = true;
  for (size_t c = 0; c < dim_; ++c) {
    if (!v[c]) continue;
    int r = pivot_row_[c];
    if (r >= 0) {
      F_->axpy(v, F_->neg(v[c]), rows_[r]);
    } else {
      zero = false;
    }
  }
  return zero;
}

bool Echelon::insert(FVec v) {
  if (reduce(v)) return false;
  size_t pc = 0;
  while (v[pc] == 0) ++pc;
  uint32_t iv = F_->inv(v[pc]);
  for (auto& x : v) x = F_->mul(x, iv);
  for (auto& r : rows_)
    if (r[pc]) F_->axpy(r, F_->neg(r[pc]), v);
  pivot_row_[pc] = static_cast<int>(rows_.size());
  pivots_.push_back(pc);
  rows_.push_back(std::move(v));
  return true;
}

std::vector<size_t> Echelon::free_columns() const {
  std::vector<size_t> f;
  for (size_t c = 0; c < dim_; ++c)
    if (pivot_row_[c] < 0) f.push_back(c);
  return f;
}

bool solve_affine(const Fp& F, const FMat& A, const FVec& b, AffineSolution& out) {
  const size_t n = A.cols;
  // Augmented elimination on [A | b].
  Echelon E(&F, n + 1);
  for (size_t i = 0; i < A.rows; ++i) {
    FVec r(n + 1);
    for (size_t j = 0; j < n; ++j) r[j] = A(i, j);
    r[n] = b[i];
    E.insert(std::move(r));
  }
  if (E.is_pivot(n)) return false;
  out.particular.assign(n, 0);
  const auto& rows = E.rows();
  const auto& piv = E.pivots();
  for (size_t r = 0; r < rows.size(); ++r) out.particular[piv[r]] = rows[r][n];
  out.kernel.clear();
  for (size_t f = 0; f < n; ++f) {
    if (E.is_pivot(f)) continue;
    FVec k(n, 0);
    k[f] = 1;
    for (size_t r = 0; r < rows.size(); ++r) k[piv[r]] = F.neg(rows[r][f]);
    out.kernel.push_back(std::move(k));
  }
  return true;
}

FVec random_vector(const Fp& F, size_t n, std::mt19937_64& rng) {
  FVec v(n);
  for (auto& x : v) x = static_cast<uint32_t>(rng() % F.p);
  return v;
}

FVec random_point(const Fp& F, const AffineSolution& s, std::mt19937_64& rng) {
  FVec x = s.particular;
  for (const auto& k : s.kernel) F.axpy(x, static_cast<uint32_t>(rng() % F.p), k);
  return x;
}

}  // namespace cll
