#pragma once
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "cll/cohomology.hpp"
#include "cll/fp.hpp"
#include "cll/group.hpp"

namespace cll {

// Words in generators x1..xm: letters with sign +1 or -1.
struct Letter {
  uint32_t gen = 0;
  int sign = 1;
};
using Word = std::vector<Letter>;

// Grammar: factor* with factor := atom ('^' int)?, atom := 'x' int | '~' atom | '[' word ',' word ']' | '(' word ')'.
Word parse_word(const std::string& text);
std::string word_to_string(const Word& w);
Word inverse_word(const Word& w);
// [x1,x2][x3,x4]...[x_{2n-1},x_{2n}]
Word standard_relator(int n);
// x1^-1 ... xm^-1 x1 ... xm
Word all_inverses_relator(int m);
Elt eval_word(const FiniteGroup& G, const std::vector<Elt>& images, const Word& w);

// Free nilpotent exponent-l group of class c <= 3 on m generators, realized on its Lie ring
// (graded Hall basis over F_l) with the truncated BCH product.
class FreeNilpotent {
 public:
  FreeNilpotent(int m, int cls, uint32_t ell);

  int num_gens() const { return m_; }
  int nil_class() const { return cls_; }
  uint32_t ell() const { return F_.p; }
  const Fp& field() const { return F_; }
  size_t dim1() const { return d1_; }
  size_t dim2() const { return d2_; }
  size_t dim3() const { return d3_; }
  size_t dim() const { return d1_ + d2_ + d3_; }
  int degree(size_t idx) const { return idx < d1_ ? 1 : (idx < d1_ + d2_ ? 2 : 3); }
  size_t idx2(int i, int j) const;  // i < j
  size_t idx3(int i, int j, int k) const;  // i < j, k >= i
  std::pair<int, int> pair_of(size_t idx) const { return pairs_[idx - d1_]; }
  struct Triple {
    int i, j, k;
  };
  Triple triple_of(size_t idx) const { return triples_[idx - d1_ - d2_]; }
  std::string basis_label(size_t idx) const;

  FVec zero() const { return FVec(dim(), 0); }
  FVec gen(int i) const;
  FVec add(const FVec& a, const FVec& b) const;
  FVec sub(const FVec& a, const FVec& b) const;
  FVec scale(const FVec& a, uint32_t c) const;
  FVec bracket(const FVec& a, const FVec& b) const;
  FVec mul(const FVec& a, const FVec& b) const;  // group product
  FVec inv(const FVec& a) const { return scale(a, F_.p - 1); }
  FVec pow(const FVec& a, int64_t k) const { return scale(a, F_.red(k)); }
  FVec comm(const FVec& a, const FVec& b) const;  // a^-1 b^-1 a b
  FVec conj(const FVec& a, const FVec& u) const;  // u a u^-1
  FVec eval(const Word& w) const;

  // Mal'cev coordinates: g = prod_i x_i^{v_i} * prod_{i<j} [x_i,x_j]^{w_ij} * prod [[x_i,x_j],x_k]^{z_ijk}.
  struct Malcev {
    std::vector<std::pair<uint32_t, uint32_t>> d1, d2, d3;  // (index within degree, exponent)
  };
  Malcev malcev(const FVec& g) const;
  // Image of g under the hom sending x_i to images[i] in H (H of exponent l and class <= c).
  Elt eval_in(const FiniteGroup& H, const std::vector<Elt>& images, const FVec& g) const;
  Elt eval_malcev(const FiniteGroup& H, const std::vector<Elt>& images, const Malcev& mc) const;

 private:
  int m_, cls_;
  Fp F_;
  size_t d1_, d2_, d3_;
  std::vector<int> pidx_;  // m*m -> pair index or -1
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> tidx_;  // (pair, k) -> triple index or -1
  std::vector<Triple> triples_;
  // [E_p, e_k] as sparse combination of degree-3 basis elements.
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> br21_;
  uint32_t half_, twelfth_;
  std::vector<FVec> comm2_;  // group elements [x_i,x_j] per pair
};

// Antisymmetric matrix of the degree-2 part of a central element, with m_ij = -a_ij (i<j), a_ji (i>j).
FMat relator_matrix(const FreeNilpotent& F, const FVec& central);

enum class RelatorKind { Standard, AllInverses };

// Truncation of the Demushkin pro-l group and its Schur covering:
// gtilde = L / K with K = span{[xi_2, e_j]} (class 3), g = gtilde / <xi>.
class DemushkinTrunc {
 public:
  DemushkinTrunc(int n, uint32_t ell, int cls, RelatorKind kind = RelatorKind::AllInverses);

  int n() const { return n_; }
  int m() const { return 2 * n_; }
  const FreeNilpotent& free() const { return *F_; }
  std::shared_ptr<const FreeNilpotent> free_ptr() const { return F_; }
  const Fp& field() const { return F_->field(); }
  RelatorKind kind() const { return kind_; }
  const Word& relator() const { return relator_; }
  const FVec& xi() const { return xi_; }
  const Echelon& kernel_span() const { return K_; }
  // Antisymmetric coefficient matrix A of the relator: A_ij = a_ij (i<j), -a_ji (i>j).
  const FMat& form() const { return J_; }
  size_t gtilde_log_order() const { return F_->dim() - K_.rank(); }
  size_t g_log_order() const { return gtilde_log_order() - 1; }

  FVec reduce(FVec v) const {
    K_.reduce(v);
    return v;
  }
  FVec mul(const FVec& a, const FVec& b) const { return reduce(F_->mul(a, b)); }
  // Gamma action (default x_i -> x_i^-1); may be replaced by a conjugate.
  FVec sigma(const FVec& v) const;
  const FMat& sigma_matrix() const { return sigma_; }
  void set_sigma(const FMat& s);  // validated involutive automorphism fixing xi
  // sigma' = tau^-1 sigma tau for a Lie automorphism tau of L preserving K and fixing xi.
  void set_sigma_conjugate(const FMat& tau);
  bool sigma_is_standard() const { return sigma_standard_; }
  bool has_conjugator() const { return !tau_.a.empty(); }
  const FMat& conjugator() const { return tau_; }
  const FMat& conjugator_inverse() const { return tau_inv_; }
  // Same with <xi> also quotiented (the group g).
  FVec reduce_g(FVec v) const {
    KX_.reduce(v);
    return v;
  }

 private:
  int n_;
  RelatorKind kind_;
  std::shared_ptr<const FreeNilpotent> F_;
  Word relator_;
  FVec lambda_, xi_;
  Echelon K_, KX_;
  FMat J_;
  FMat sigma_, tau_, tau_inv_;
  bool sigma_standard_ = true;
};

// Automorphism phi of gtilde x| Gamma given by phi(g) = u psi(g) u^-1 on gtilde and phi(s) = t s,
// t = u sigma(u)^-1, where psi is the Lie automorphism determined by the generator images.
struct ConstrainedAut {
  uint32_t q = 1;
  FMat T;                        // column i is the degree-1 image of x_i
  std::vector<FVec> gen_images;  // psi(e_i) in L
  FMat psi;                      // psi on all of L (column b = image of basis element b)
  FVec u, t;
  FVec apply_psi(const DemushkinTrunc& D, const FVec& v) const;
  FVec apply(const DemushkinTrunc& D, const FVec& v) const;
};
ConstrainedAut make_aut(const DemushkinTrunc& D, uint32_t q, const std::vector<FVec>& gen_images, const FVec& u);
// Throws VerificationFailed unless phi is an automorphism of gtilde x| Gamma acting by q on <xi>.
void verify_aut(const DemushkinTrunc& D, const ConstrainedAut& a, bool check_gamma = true);

// Symplectic tools for beta(x,y) = x^T J y.
uint32_t beta(const Fp& F, const FMat& J, const FVec& x, const FVec& y);
// Basis (columns) extending the partial vectors; the Gram matrix of the result equals
// scale * C(G_p / scale) for a canonical C, so completions of two tuples whose Gram matrices
// differ by the factor q differ by a similitude of multiplier q.
FMat symplectic_completion(const Fp& F, const FMat& J, const std::vector<FVec>& partial, uint32_t scale);
// Same with a prescribed Gram matrix of the partial vectors, checked first.
FMat q_symplectic_completion(const Fp& F, const FMat& J, const std::vector<FVec>& partial, const FMat& prescribed,
                             uint32_t scale);
// Uniform M with M^T J M = q J.
FMat sample_similitude(const Fp& F, const FMat& J, uint32_t q, std::mt19937_64& rng);
// All M with M^T J M = q J (small cases only).
std::vector<FMat> enumerate_similitudes(const Fp& F, const FMat& J, uint32_t q);

// Uniform element of Aut(gtilde x| Gamma, proj; q).
ConstrainedAut sample_constrained_aut(const DemushkinTrunc& D, uint32_t q, std::mt19937_64& rng,
                                      bool verify = true);
// Uniform element of Aut(gtilde, proj; 1) for the Gamma-free model (no Gamma compatibility).
ConstrainedAut sample_plain_aut(const DemushkinTrunc& D, std::mt19937_64& rng, bool verify = true);
// Automorphism from its parameters (T = M^T, degree-3 corrections d, conjugator u).
ConstrainedAut gamma_aut_from_params(const DemushkinTrunc& D, uint32_t q, const FMat& M,
                                     const std::vector<FVec>& d, const FVec& u);

// Solves the bilinear layer T^(2) / T^(3) (T^(2))^l for lambda = prod [y_i,y_j]^{b_ij}
// and assembles the pairing exponents f_ij (powers of a fixed primitive l^n-th root of unity).
struct PairingImage {
  std::vector<std::vector<int64_t>> b;       // b[i][j] for i < j (mod l)
  std::vector<std::vector<uint64_t>> f;      // exponent of zeta_n
  std::vector<uint64_t> dual_log;            // log of y_i^vee(y_i)
  uint64_t modulus = 1;
};
PairingImage pairing_image(GroupPtr T, const std::vector<Elt>& gens, const Word& lambda, uint64_t ell, int n);
PairingImage pairing_image_element(GroupPtr T, const std::vector<Elt>& gens, Elt lambda, uint64_t ell, int n);

}  // namespace cll
