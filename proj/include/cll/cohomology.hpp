#pragma once
#include <cstdint>
#include <memory>
#include <vector>

#include "cll/group.hpp"
#include "cll/zmod.hpp"

namespace cll {

// Normalized 2-cocycle with trivial action and values in Z/modulus.
struct Cocycle2 {
  GroupPtr group;
  uint64_t modulus = 1;
  std::vector<uint64_t> values;  // |G| x |G|
  uint64_t at(Elt x, Elt y) const { return values[static_cast<size_t>(x) * group->order() + y]; }
  bool is_normalized() const;
  bool is_cocycle() const;
};

// Presentation data of G from a spanning tree of its Cayley graph: the relation module
// R/[R,R] has one basis vector per non-tree edge, and G-invariant functionals on it modulo
// restrictions of homomorphisms F -> A give H^2(G, A).
class HopfData {
 public:
  enum class Tree { BFS, DFS };
  HopfData(GroupPtr G, std::vector<Elt> gens, Tree tree = Tree::BFS);

  const FiniteGroup& group() const { return *G_; }
  GroupPtr group_ptr() const { return G_; }
  size_t num_gens() const { return S_.size(); }
  const std::vector<Elt>& gens() const { return S_; }
  size_t num_edges() const { return E_; }            // non-tree edges
  int64_t edge_col(Elt x, size_t j) const { return col_[static_cast<size_t>(x) * S_.size() + j]; }
  const std::vector<uint32_t>& tree_word(Elt x) const { return word_[x]; }
  const std::vector<Elt>& discovery_order() const { return order_; }

  // Rows t*c_e - e for each generator t and non-tree edge e (entries reduced mod R.N).
  Mat relation_matrix(const ZMod& R) const;
  // Exponent-sum map R^ab -> Z^k as a k x E integer matrix (entries reduced mod R.N).
  Mat exponent_sum_matrix(const ZMod& R) const;
  // Coboundary functionals (values of the homomorphisms F -> Z sending s_j to 1).
  std::vector<std::vector<int64_t>> coboundary_functionals() const;

  Cocycle2 cocycle_from_functional(const std::vector<uint64_t>& f, uint64_t modulus) const;
  std::vector<uint64_t> functional_from_cocycle(const Cocycle2& c) const;

 private:
  GroupPtr G_;
  std::vector<Elt> S_;
  size_t E_ = 0;
  std::vector<int64_t> col_;                 // edge -> non-tree column or -1
  std::vector<std::vector<uint32_t>> word_;  // tree word per vertex
  std::vector<Elt> parent_;
  std::vector<uint32_t> parent_gen_;
  std::vector<Elt> order_;  // discovery order
};

// H^2(G, Z/M) for M = l^a.
struct H2Data {
  ZMod R;
  std::shared_ptr<const HopfData> hopf;
  AbelianStructure structure;
  std::vector<std::vector<uint64_t>> basis;  // functionals of basis classes
  std::vector<uint64_t> orders;
  // Internal: kernel basis of the relation matrix and the quotient map.
  std::vector<std::vector<uint64_t>> zbasis;
  std::vector<uint64_t> zorders;
  SNF zsnf;
  std::vector<size_t> zpos;  // SNF position of each z generator
  QuotientModule quot;
  std::vector<uint64_t> class_coords(const std::vector<uint64_t>& f) const;
  std::vector<uint64_t> functional_of(const std::vector<uint64_t>& coords) const;
};
H2Data compute_h2(std::shared_ptr<const HopfData> hopf, const ZMod& R);

struct H2Result {
  AbelianStructure structure;
  std::vector<Cocycle2> basis;
  uint64_t modulus = 1;
};
// Cap |G| <= 128.
H2Result h2(GroupPtr G, uint64_t ell, int exp);
// Smallest N with l^N >= exp(G) |G|.
int design_exponent(const FiniteGroup& G, uint64_t ell);
// l-part of G^ab as primary factors.
AbelianStructure abelianization_part(GroupPtr G, uint64_t ell);
AbelianStructure schur_multiplier_l(GroupPtr G, uint64_t ell);

struct CentralExtension {
  GroupPtr total;
  GroupPtr base;
  GroupHom proj;
  Subgroup kernel;
  AbelianSubgroupData kernel_data;
  std::vector<std::vector<Elt>> fibers;  // per base element
  bool central_verified = false;
  bool stem_verified = false;
  uint64_t cocycle_hash = 0;
  std::vector<Cocycle2> cocycles;  // defining cocycles when built from them
  std::vector<uint64_t> kernel_coords(Elt k) const { return kernel_data.coords_of(k); }
};
// Total group on A x G, A = sum of Z/modulus_i, element index a + |A| x.
CentralExtension extension_from_cocycles(GroupPtr G, const std::vector<Cocycle2>& comps);
CentralExtension extension_from_cocycle(GroupPtr G, const Cocycle2& alpha);
// Finishes a CentralExtension given total and proj (computes kernel, fibers, flags).
CentralExtension make_central_extension(GroupPtr total, GroupPtr base, std::vector<Elt> proj_map);

CentralExtension l_schur_cover(GroupPtr G, uint64_t ell);
// Product of the l-covers over the listed primes (all prime divisors of |G| if empty).
CentralExtension schur_cover(GroupPtr G, std::vector<uint64_t> primes = {});
// Quotient of a Schur cover by commutators of lifts of commuting pairs with one entry in c.
CentralExtension reduced_schur_cover(GroupPtr G, const CSet& c, std::vector<uint64_t> primes = {});
CentralExtension reduce_cover(const CentralExtension& S, const CSet& c);

Elt unique_same_order_lift(const CentralExtension& ext, Elt g);
Elt lifting_invariant(const std::vector<Elt>& tuple, const CentralExtension& ext);

struct CoinflationMap {
  AbelianStructure src, dst;
  std::vector<std::vector<uint64_t>> matrix;  // matrix[j][i]: coefficient of dst basis j in image of src basis i
  std::vector<uint64_t> apply(const std::vector<uint64_t>& x) const;
};
// Coinflation H_2(src)(l) -> H_2(dst)(l) of a surjection, in fixed deterministic bases.
CoinflationMap coinflation(const GroupHom& alpha, uint64_t ell);

// Structure of d(H^2(G, Z/N)) inside Hom(H_2, Z/N), in deterministic coordinates.
struct DualMultiplier {
  ZMod R;
  std::shared_ptr<const HopfData> hopf;
  H2Data h2;
  std::vector<std::vector<uint64_t>> kgens;  // generators of ker(exponent sum) mod N
  AbelianStructure structure;
  SubmoduleCoords dual;  // basis of the image
  std::vector<uint64_t> values(const std::vector<uint64_t>& f) const;  // f on kgens
  std::vector<uint64_t> coords(const std::vector<uint64_t>& f) const;  // in dual basis
};
DualMultiplier dual_multiplier(GroupPtr G, uint64_t ell, int exp);

void clear_cover_cache();

}  // namespace cll
