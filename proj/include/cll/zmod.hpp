#pragma once
#include <cstdint>
#include <vector>

#include "cll/group.hpp"

namespace cll {

// Arithmetic in Z/p^k with p^k < 2^63.
struct ZMod {
  uint64_t p = 2;
  int k = 1;
  uint64_t N = 2;

  ZMod() = default;
  ZMod(uint64_t p_, int k_);
  static ZMod from_modulus(uint64_t prime, uint64_t modulus);

  uint64_t red(int64_t x) const {
    int64_t r = x % static_cast<int64_t>(N);
    return static_cast<uint64_t>(r < 0 ? r + static_cast<int64_t>(N) : r);
  }
  uint64_t add(uint64_t a, uint64_t b) const { return static_cast<uint64_t>((static_cast<unsigned __int128>(a) + b) % N); }
  uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : N - (b - a); }
  uint64_t mul(uint64_t a, uint64_t b) const {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % N);
  }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : N - a; }
  int val(uint64_t a) const;         // p-adic valuation, k for zero
  uint64_t unit_inv(uint64_t a) const;  // a must be a unit
  uint64_t ppow(int e) const;        // p^e (e <= k)
};

struct Mat {
  size_t rows = 0, cols = 0;
  std::vector<uint64_t> a;
  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}
  uint64_t& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  uint64_t operator()(size_t i, size_t j) const { return a[i * cols + j]; }
  static Mat identity(size_t n);
};

struct SNF {
  std::vector<int> vals;  // valuation of diagonal entry i (k means zero); size min(rows, cols)
  size_t rank = 0;        // number of nonzero diagonal entries
  Mat P, Pinv, Q, Qinv;   // D = P A Q
};

SNF smith_normal_form(const Mat& A, const ZMod& R, bool track_P, bool track_Q);

// Generators of {x : A x = 0}, each with its additive order (a power of p).
struct KernelGens {
  std::vector<std::vector<uint64_t>> gens;
  std::vector<uint64_t> orders;
};
KernelGens kernel_mod(const Mat& A, const ZMod& R);

// Finite abelian group given by its factor orders (prime powers, ascending per prime).
struct AbelianStructure {
  std::vector<uint64_t> factors;
  uint64_t order() const;
  bool operator==(const AbelianStructure& o) const { return factors == o.factors; }
};
AbelianStructure normalize_factors(std::vector<uint64_t> factors);  // drops 1s, sorts

// Quotient (Z/N)^t / rowspan(rels) as a sum of cyclic groups with a coordinate map.
struct QuotientModule {
  ZMod R;
  std::vector<uint64_t> orders;             // order of each nontrivial cyclic factor
  std::vector<size_t> index;                // SNF position of each factor
  Mat Q, Qinv;
  std::vector<uint64_t> coords(const std::vector<uint64_t>& x) const;
  std::vector<uint64_t> basis_vector(size_t i) const;  // preimage in (Z/N)^t of factor i's generator
};
QuotientModule quotient_module(const Mat& rels, size_t t, const ZMod& R);

// Submodule of (Z/N)^r spanned by rows, with a basis and coordinates. preimage(i) is the
// combination of input rows giving basis element i.
struct SubmoduleCoords {
  ZMod R;
  std::vector<uint64_t> orders;
  std::vector<size_t> index;
  std::vector<uint64_t> divisors;
  Mat Q, Qinv, P;
  std::vector<uint64_t> coords(const std::vector<uint64_t>& x) const;
  std::vector<uint64_t> basis_vector(size_t i) const;
  std::vector<uint64_t> preimage(size_t i) const;
};
SubmoduleCoords submodule_coords(const std::vector<std::vector<uint64_t>>& rows, size_t r, const ZMod& R);

// Order of the subgroup of (Z/N)^r generated by the given rows.
uint64_t span_order(const std::vector<std::vector<uint64_t>>& rows, size_t r, const ZMod& R);

// Structure of an abelian subgroup of a table group: primary factors, a basis realizing
// them, and coordinates of every member.
struct AbelianSubgroupData {
  AbelianStructure structure;
  std::vector<Elt> basis;
  std::vector<Elt> members;                    // sorted
  std::vector<std::vector<uint64_t>> coords;   // aligned with members
  std::vector<uint64_t> coords_of(Elt x) const;
  Elt element_of(const std::vector<uint64_t>& c) const;
  const FiniteGroup* group = nullptr;
};
AbelianSubgroupData abelian_subgroup_structure(const FiniteGroup& G, const Subgroup& A);

std::vector<uint64_t> prime_factors(uint64_t n);
uint64_t mod_inverse(int64_t a, int64_t m);  // gcd(a, m) must be 1

}  // namespace cll
