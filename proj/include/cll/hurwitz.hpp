#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "cll/cohomology.hpp"
#include "cll/group.hpp"

namespace cll {

// Conjugacy classes of a conjugation-stable set c with chosen representatives and lifts in a
// central extension S_c -> G (by default the reduced Schur covering).
struct CSetData {
  CentralExtension cover;
  CSet cset;
  std::vector<std::vector<Elt>> classes;  // c/G
  std::vector<Elt> class_reps;
  std::vector<Elt> rep_lifts;
  std::vector<int> class_of;  // per element of G, -1 outside c
  std::vector<Elt> lift;      // per element of c: conjugate of its representative lift
  QuotientResult ab;          // G -> G^ab
  uint64_t kernel_exponent = 1;
  uint64_t unit_modulus = 1;  // powers are taken modulo this
  size_t num_classes() const { return classes.size(); }
};

// Lifts chosen as the smallest-order fiber element over the smallest member of each class.
CSetData make_cset_data(const CentralExtension& cover, const CSet& c);
// Explicit representatives and lifts (one per class, in class order).
CSetData make_cset_data(const CentralExtension& cover, const CSet& c, const std::vector<Elt>& reps,
                        const std::vector<Elt>& rep_lifts);
CSetData make_cset_data(GroupPtr G, const CSet& c);

// Throws QNotCoprime unless q is prime to every order in c and to |ker(S_c -> G)|.
void check_q(const CSetData& d, int64_t q);
// Class permutation induced by x -> x^q.
std::vector<int> power_permutation(const CSetData& d, int64_t q);
std::vector<std::vector<int>> q_orbits(const CSetData& d, int64_t q);
int d_gcq(const CSetData& d, int64_t q);

// Element (h, m) of K(G, c): h in ker(S_c -> G), m indexed by c/G.
struct KElement {
  Elt h = 0;
  std::vector<int64_t> m;
  bool operator==(const KElement& o) const { return h == o.h && m == o.m; }
};

// Inverse of a unit modulo d.unit_modulus, as a nonnegative residue.
uint64_t unit_inverse(const CSetData& d, int64_t a);
// Kernel part of x_gamma^-alpha * lift(x_gamma^alpha), per class.
std::vector<Elt> w_alpha(const CSetData& d, int64_t alpha);
Elt W_alpha(const CSetData& d, const std::vector<Elt>& w, const std::vector<int64_t>& m);
KElement alpha_star(const CSetData& d, int64_t alpha, const KElement& z);

// Vectors constant on q-orbits with coordinates >= M summing to n.
std::vector<std::vector<int64_t>> enumerate_vectors(const CSetData& d, int64_t q, int64_t n, int64_t M);
// Whether prod rep_gamma^{m_gamma} is trivial in G^ab.
bool in_abelian_kernel(const CSetData& d, const std::vector<int64_t>& m);

// b(G, c, q, n), optionally restricted to kernel elements h with filter(h).
uint64_t b_count(const CSetData& d, int64_t q, int64_t n, const std::function<bool(Elt)>& filter = nullptr);

// Number of z = (h, m) with coordinates >= M summing to n, m in ker(Z^{c/G} -> G^ab), fixed by q^-1 *.
uint64_t count_frobenius_fixed(const CSetData& d, int64_t q, int64_t n, int64_t M);

// Compatible coverings for G = H x| Gamma: S' the cover over primes of |G| prime to q|Gamma|,
// S2 the reduced covering of (Gamma, Gamma - 1), S1 = S' x_Gamma S2 as an explicit pair table.
struct DeltaCover {
  GammaGroup action;
  GroupPtr G;
  GroupHom rho;  // G -> Gamma
  CSet c1, c2;
  CentralExtension sprime;
  CSetData d1;  // over S1
  CSetData d2;  // over the reduced covering of (Gamma, c2), built independently
  std::vector<Elt> phi;  // S1 -> S' (total indices)
  std::vector<Elt> to_s2;  // S1 -> S2 (total indices)
  uint64_t reduced_kernel_order = 0;  // |ker| of reduced_schur_cover(G, c1), for comparison
};
DeltaCover make_delta_cover(const GammaGroup& H, int64_t q);
// eta given by coordinates in the kernel of S' -> G.
Elt eta_from_coords(const DeltaCover& dc, const std::vector<uint64_t>& coords);
uint64_t b_count_delta(const DeltaCover& dc, int64_t q, int64_t n, Elt eta);

}  // namespace cll
