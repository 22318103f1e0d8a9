#pragma once
#include <cstdint>
#include <random>
#include <vector>

namespace cll {

using FVec = std::vector<uint32_t>;

// Prime field F_p with p < 2^16.
struct Fp {
  uint32_t p = 2;
  std::vector<uint32_t> inv_table;
  Fp() = default;
  explicit Fp(uint32_t prime);
  uint32_t add(uint32_t a, uint32_t b) const { uint32_t s = a + b; return s >= p ? s - p : s; }
  uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p - b; }
  uint32_t mul(uint32_t a, uint32_t b) const { return (a * b) % p; }
  uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p - a; }
  uint32_t inv(uint32_t a) const { return inv_table[a]; }
  uint32_t red(int64_t a) const {
    int64_t r = a % static_cast<int64_t>(p);
    return static_cast<uint32_t>(r < 0 ? r + p : r);
  }
  // y += c * x
  void axpy(FVec& y, uint32_t c, const FVec& x) const;
};

// Dense row-major matrix over F_p.
struct FMat {
  size_t rows = 0, cols = 0;
  FVec a;
  FMat() = default;
  FMat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}
  uint32_t& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  uint32_t operator()(size_t i, size_t j) const { return a[i * cols + j]; }
  static FMat identity(size_t n);
  FVec col(size_t j) const;
  void set_col(size_t j, const FVec& v);
  FMat transpose() const;
  bool operator==(const FMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};
FMat mat_mul(const Fp& F, const FMat& A, const FMat& B);
FVec mat_vec(const Fp& F, const FMat& A, const FVec& x);
bool mat_inverse(const Fp& F, const FMat& A, FMat& out);
size_t mat_rank(const Fp& F, const FMat& A);

// Incrementally maintained reduced row echelon basis of a subspace of F_p^dim.
// Pivot of a row is its first nonzero coordinate; rows are fully reduced.
class Echelon {
 public:
  Echelon() = default;
  Echelon(const Fp* F, size_t dim) : F_(F), dim_(dim), pivot_row_(dim, -1) {}
  size_t dim() const { return dim_; }
  size_t rank() const { return rows_.size(); }
  // Reduce v to its canonical representative modulo the span. Returns true if the result is zero.
  bool reduce(FVec& v) const;
  // Adds v to the span; returns true if it was independent.
  bool insert(FVec v);
  bool contains(FVec v) const { return reduce(v); }
  bool is_pivot(size_t c) const { return pivot_row_[c] >= 0; }
  const std::vector<FVec>& rows() const { return rows_; }
  const std::vector<size_t>& pivots() const { return pivots_; }
  std::vector<size_t> free_columns() const;

 private:
  const Fp* F_ = nullptr;
  size_t dim_ = 0;
  std::vector<FVec> rows_;
  std::vector<size_t> pivots_;
  std::vector<int> pivot_row_;
};

// Solution set of A x = b: x = particular + span(kernel). Returns false if inconsistent.
struct AffineSolution {
  FVec particular;
  std::vector<FVec> kernel;
};
bool solve_affine(const Fp& F, const FMat& A, const FVec& b, AffineSolution& out);
FVec random_vector(const Fp& F, size_t n, std::mt19937_64& rng);
FVec random_point(const Fp& F, const AffineSolution& s, std::mt19937_64& rng);

}  // namespace cll
