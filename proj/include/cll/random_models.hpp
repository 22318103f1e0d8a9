#pragma once
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cll/cohomology.hpp"
#include "cll/group.hpp"
#include "cll/nilpotent.hpp"

namespace cll {

// Quotient V = G / [G,G] G^l of an l-group with coordinates over F_l.
struct FrattiniQuotient {
  uint32_t dim = 0;
  std::vector<FVec> coords;  // per element of G
};
FrattiniQuotient frattini_quotient(const FiniteGroup& G, uint32_t ell);

// Target H x| Gamma (Gamma = Z/2) with its l-Schur covering, as used for the pi-dagger invariant.
struct TargetGroup {
  GammaGroup H;
  SemidirectResult sd;
  CentralExtension cover;  // empty total when not needed
  uint32_t ell = 3;
  Elt gamma_gen = 0;
  std::vector<Elt> gamma_img;  // gamma(h)
  FrattiniQuotient frattini;
  uint64_t fixed_index = 1;
  bool has_cover() const { return cover.total != nullptr; }
};
// Requires H of exponent dividing l, nilpotency class <= cls, and Gamma of order 2.
TargetGroup make_target(const GammaGroup& H, uint32_t ell, int cls, bool with_cover = true);
TargetGroup make_plain_target(GroupPtr H, uint32_t ell, int cls);

struct DeltaTarget {
  Elt value = 0;  // element of the covering kernel
  uint64_t order = 1;
};
DeltaTarget make_delta(const TargetGroup& T, const std::vector<uint64_t>& coords);

// Lift the generator images (elements of H) to the covering of H x| Gamma, evaluate the relator.
// With rng the lifts are drawn uniformly from the fibers.
Elt pi_dagger(const TargetGroup& T, const Word& relator, const std::vector<Elt>& images,
              std::mt19937_64* rng = nullptr);

// gtilde / I for an ideal I (containing K) in Lie coordinates, presented on the degree-1 letters
// that are not pivots of I.
struct QuotientPresentation {
  Echelon ideal;
  std::vector<uint32_t> free_letters;
  std::vector<FreeNilpotent::Malcev> gen_words;  // every generator in the free letters
  std::vector<FreeNilpotent::Malcev> relations;  // Mal'cev forms of a basis of I
  size_t log_order = 0;                          // dim(L / I)
};
QuotientPresentation present_quotient(const FreeNilpotent& F, Echelon ideal);

// Smallest subspace containing the seeds and stable under ad(e_j), sigma (optional) and phi (optional).
Echelon ideal_closure(const DemushkinTrunc& D, const std::vector<FVec>& seeds, bool sigma_stable,
                      const ConstrainedAut* phi);
// Ideal defining Y = ker(X -> Gamma) inside gtilde.
Echelon y_ideal(const DemushkinTrunc& D, const ConstrainedAut& phi);
// Ideal defining Z: normal closure of a_i = x_{2i-1} and phi(a_i).
Echelon z_ideal(const DemushkinTrunc& D, const ConstrainedAut& phi);

// Calls fn(images) for every surjection gtilde / I -> H whose generator images pass accept.
// candidates[k] lists allowed images of free letter k.
void for_each_quotient_surjection(const FreeNilpotent& F, const QuotientPresentation& P, const FiniteGroup& H,
                                  const FrattiniQuotient& frat, const std::vector<std::vector<Elt>>& candidates,
                                  const std::function<bool(const std::vector<Elt>&)>& accept,
                                  const std::function<void(const std::vector<Elt>&)>& fn);

struct YSampleCounts {
  uint64_t y_sur = 0;    // #Sur_Gamma(Y, H)
  uint64_t y_delta = 0;  // with pi-dagger = delta
  uint64_t x_sur = 0;    // #Sur(X, H x| Gamma)
  uint64_t x_delta = 0;
  std::vector<uint64_t> y_by_value;  // per covering kernel element (index into cover.kernel)
};
YSampleCounts count_y_sample(const DemushkinTrunc& D, const ConstrainedAut& phi, const TargetGroup& T,
                             const DeltaTarget& delta, bool with_x = true);
uint64_t count_z_sample(const DemushkinTrunc& D, const ConstrainedAut& phi, const TargetGroup& T);

// Matrix-only count for H = (Z/l)^r with inversion: independent r-tuples in
// {a : a(T - 1) = 0, a . t_1 = 0}; for r = 2 with zero_pairing only pairs with a_1 J a_2^T = 0.
uint64_t matrix_count(const DemushkinTrunc& D, const ConstrainedAut& phi, int r, bool zero_pairing);

// Explicit tables (small n only): gtilde x| Gamma, X and Y.
struct FixedQuotientTables {
  GroupPtr ambient;  // gtilde x| Gamma, element index = gtilde index + |gtilde| * s
  std::vector<FVec> gtilde_elems;
  GroupPtr X;
  GroupHom proj;  // ambient -> X
  GammaGroup Y;   // kernel of X -> Gamma with the conjugation action
};
FixedQuotientTables build_fixed_quotient(const DemushkinTrunc& D, const ConstrainedAut& phi);

// Orbit transitivity on Sur_Gamma(g, H) grouped by lifted invariant.
struct OrbitReport {
  uint64_t surjections = 0;
  uint64_t automorphisms = 0;
  uint64_t invariant_classes = 0;
  uint64_t orbits = 0;
  uint64_t pairs_checked = 0;
  uint64_t witness_failures = 0;
  bool transitive = false;
};
// Exhaustive over Aut(gtilde x| Gamma, proj; q) for n = 1 (class 2).
OrbitReport orbit_check_exhaustive(uint32_t ell, int64_t q, const GammaGroup& H);
// Constructive witnesses for random pairs with matching invariants, H elementary abelian with inversion.
OrbitReport orbit_check_witness(int n, uint32_t ell, int64_t q, const GammaGroup& H, int pairs, uint64_t seed);

// ---------------------------------------------------------------- moment estimators

struct MomentEstimate {
  double mean = 0, stderr_ = 0;
  uint64_t samples = 0, seed = 0;
  bool all_zero = false;  // every sample was zero
  double target = 0;
  bool has_target = false;
  double sigmas_off() const;  // |mean - target| / stderr; 0 when both agree exactly
};

struct YMomentConfig {
  int n = 2;
  uint32_t ell = 3;
  int cls = 2;
  int64_t q = 7;
  GammaGroup H;
  std::vector<uint64_t> delta;  // coordinates in the covering kernel basis; empty = identity
  uint64_t samples = 100000, seed = 1;
  int threads = 1;
  bool sigma_conjugate = false;  // replace sigma by tau^-1 sigma tau for a sampled tau
  uint64_t sigma_seed = 0;
};

struct YMomentReport {
  MomentEstimate y_delta, x_delta, y_total, x_total;
  MomentEstimate x_minus_index_y;  // X - [H:H^Gamma] Y per sample
  bool has_matrix = false;
  MomentEstimate matrix;             // matrix-only count on the same automorphism stream
  MomentEstimate matrix_minus_group;  // per-sample difference
  uint64_t fixed_index = 1, delta_order = 1, admissible_deltas = 1;
  bool delta_order_violation = false;
  double surjection_fraction = 0;  // share of samples with Sur_Gamma(Y, H) nonempty
};
YMomentReport estimate_moment_y(const YMomentConfig& cfg);

struct ZMomentConfig {
  int n = 3;
  uint32_t ell = 3;
  int cls = 2;
  std::vector<GroupPtr> targets;  // estimated on one shared sample stream
  uint64_t samples = 100000, seed = 1;
  int threads = 1;
};
// |[H,H]| |H_2(H, Z)| for an l-group H.
uint64_t z_moment_target(GroupPtr H, uint32_t ell);
std::vector<MomentEstimate> estimate_moment_z(const ZMomentConfig& cfg);

}  // namespace cll
