#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cll/errors.hpp"

namespace cll {

using Elt = uint32_t;
using Subgroup = std::vector<Elt>;  // sorted element indices

constexpr uint32_t kTableCap = 2048;
constexpr uint32_t kEnumCap = 256;

class FiniteGroup {
 public:
  // Validating constructor from a square table.
  static FiniteGroup from_mult_table(const std::vector<std::vector<Elt>>& table, Elt identity,
                                     std::vector<std::string> labels = {});
  // Flat row-major table. When validate is false the caller vouches for the group axioms.
  static FiniteGroup from_flat(uint32_t n, std::vector<Elt> flat, Elt identity, bool validate = true);

  uint32_t order() const { return n_; }
  Elt id() const { return id_; }
  Elt mul(Elt a, Elt b) const { return mult_[static_cast<size_t>(a) * n_ + b]; }
  Elt inv(Elt a) const { return inv_[a]; }
  Elt pow(Elt a, int64_t k) const;
  Elt comm(Elt a, Elt b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  Elt conj(Elt a, Elt g) const { return mul(mul(inv(g), a), g); }  // g^-1 a g
  uint32_t elem_order(Elt a) const { return orders_[a]; }
  uint32_t exponent() const;
  bool is_abelian() const;

  const std::vector<Elt>& gens() const { return gens_; }
  void set_gens(std::vector<Elt> gens);  // validated: must generate
  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }
  const std::vector<Elt>& table() const { return mult_; }
  uint64_t hash() const;

  // Exhaustive check for n <= 512, otherwise 1e5 random triples.
  void validate() const;

 private:
  void finish();
  uint32_t n_ = 0;
  Elt id_ = 0;
  std::vector<Elt> mult_;
  std::vector<Elt> inv_;
  std::vector<uint32_t> orders_;
  std::vector<Elt> gens_;
  std::vector<std::string> labels_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;
GroupPtr make_group(FiniteGroup g);

struct GroupHom {
  GroupPtr src, dst;
  std::vector<Elt> map;
  Elt operator()(Elt x) const { return map[x]; }
  // Checks map(xy) = map(x)map(y) for all pairs.
  static GroupHom make(GroupPtr src, GroupPtr dst, std::vector<Elt> map);
  bool surjective() const;
  Subgroup kernel() const;
  Subgroup image() const;
  GroupHom compose_after(const GroupHom& first) const;  // this ∘ first
};

// Extends generator images to a homomorphism; NotHomomorphism if inconsistent.
GroupHom hom_from_generator_images(GroupPtr src, const std::vector<Elt>& gens, GroupPtr dst,
                                   const std::vector<Elt>& images);

struct GammaGroup {
  GroupPtr group, gamma;
  std::vector<Elt> action;  // action[g * |group| + h]
  Elt act(Elt g, Elt h) const { return action[static_cast<size_t>(g) * group->order() + h]; }
  static GammaGroup make(GroupPtr group, GroupPtr gamma, std::vector<Elt> action);
  static GammaGroup trivial(GroupPtr group, GroupPtr gamma);
};

struct SemidirectResult {
  GroupPtr group;
  GroupHom emb_h, emb_gamma, proj_gamma;
};
// (h,g)(h',g') = (h g(h'), g g'); element index h + |H| g.
SemidirectResult semidirect_product(const GammaGroup& act);

struct CSet {
  GroupPtr group;
  std::vector<Elt> members;  // sorted
  static CSet make(GroupPtr group, std::vector<Elt> members);
  bool contains(Elt x) const;
};

Subgroup generated_subgroup(const FiniteGroup& G, const std::vector<Elt>& seeds);
bool generates(const FiniteGroup& G, const std::vector<Elt>& seeds);
Subgroup normal_closure(const FiniteGroup& G, const std::vector<Elt>& seeds,
                        const GammaGroup* gamma = nullptr);
bool is_normal(const FiniteGroup& G, const Subgroup& N);
bool is_subgroup(const FiniteGroup& G, const Subgroup& N);

struct QuotientResult {
  GroupPtr group;
  GroupHom proj;
};
QuotientResult quotient(GroupPtr G, const Subgroup& N);

Subgroup commutator_subgroup(const FiniteGroup& G);
std::vector<Subgroup> lower_central_series(const FiniteGroup& G);
Subgroup center(const FiniteGroup& G);
Subgroup centralizer(const FiniteGroup& G, Elt x);
std::vector<std::vector<Elt>> conjugacy_classes(const FiniteGroup& G);
// Greedy small generating tuple.
std::vector<Elt> small_generating_set(const FiniteGroup& G);

bool is_admissible(const GammaGroup& H);
Subgroup fixed_subgroup(const GammaGroup& H);
uint32_t fixed_index(const GammaGroup& H);

struct SurjOptions {
  const GammaGroup* gamma_src = nullptr;  // when both set: equivariance on Γ-generators
  const GammaGroup* gamma_dst = nullptr;
  bool surjective_only = true;
  uint32_t cap = kEnumCap;
};
// Calls fn(map) for each (equivariant, surjective) hom; fn returns false to stop.
void for_each_hom(const FiniteGroup& G, const FiniteGroup& H, const SurjOptions& opt,
                  const std::function<bool(const std::vector<Elt>&)>& fn);
std::vector<GroupHom> enumerate_surjections(GroupPtr G, GroupPtr H, const GammaGroup* gamma_G = nullptr,
                                            const GammaGroup* gamma_H = nullptr);
uint64_t count_surjections(const FiniteGroup& G, const FiniteGroup& H, const GammaGroup* gamma_G = nullptr,
                           const GammaGroup* gamma_H = nullptr);

// Catalog and constructors.
GroupPtr cyclic_group(uint32_t m);
GroupPtr elem_abelian_group(uint32_t l, uint32_t r);
GroupPtr heisenberg_group(uint32_t l);
GroupPtr dihedral_group(uint32_t m);
GroupPtr direct_product(const FiniteGroup& A, const FiniteGroup& B);
GroupPtr group_from_json_file(const std::string& path);
GroupPtr group_from_json_text(const std::string& text);
// cyclic:m, elem_abelian:l^r, heisenberg:l, dihedral:m, semidirect_inversion:l^r, or a JSON path.
GroupPtr catalog_group(const std::string& spec);
// "<group-spec>" (inversion action) or "<group-spec>@inversion|trivial"; Γ = Z/2.
GammaGroup gamma_group_from_spec(const std::string& spec);
// Automorphism inverting each stored generator (inversion map for abelian groups).
GammaGroup inversion_action(GroupPtr H);
// all, order:k, elements:i,j,..., gamma-nontrivial (elements outside a given normal subgroup).
CSet cset_from_spec(GroupPtr G, const std::string& spec, const Subgroup* kernel_part = nullptr);
// Group relabelled by the permutation perm (new index of old element x is perm[x]).
GroupPtr relabel(const FiniteGroup& G, const std::vector<Elt>& perm);
std::string group_to_json(const FiniteGroup& G);

// Sorted multiset of element orders with class-size profile.
std::vector<uint64_t> fingerprint(const FiniteGroup& G);

}  // namespace cll
