#include <cmath>
#include <random>

#include "cll/random_models.hpp"
#include "doctest.h"

using namespace cll;

namespace {

GammaGroup inv_elem(uint32_t l, uint32_t r) { return inversion_action(elem_abelian_group(l, r)); }

// Surjections X -> H x| Gamma by brute force over the table of X.
uint64_t table_x_count(const FixedQuotientTables& tb, const TargetGroup& T) {
  return count_surjections(*tb.X, *T.sd.group);
}

}  // namespace

TEST_CASE("Frattini quotient dimensions") {
  CHECK(frattini_quotient(*cyclic_group(3), 3).dim == 1);
  CHECK(frattini_quotient(*elem_abelian_group(3, 2), 3).dim == 2);
  CHECK(frattini_quotient(*heisenberg_group(3), 3).dim == 2);
}

TEST_CASE("target shape checks") {
  CHECK_THROWS_AS(make_target(inversion_action(cyclic_group(9)), 3, 2), Error);
  CHECK_NOTHROW(make_target(inv_elem(3, 1), 3, 2));
  CHECK(make_target(inv_elem(3, 2), 3, 2).cover.kernel.size() == 3);
  CHECK(make_target(inv_elem(3, 1), 3, 2).cover.kernel.size() == 1);
  CHECK(make_target(inv_elem(3, 1), 3, 2).fixed_index == 3);
}

TEST_CASE("lifted invariant does not depend on the lifts") {
  TargetGroup T = make_target(inv_elem(3, 2), 3, 2);
  std::mt19937_64 rng(5);
  Word rel = all_inverses_relator(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<Elt> im(4);
    for (auto& x : im) x = static_cast<Elt>(rng() % 9);
    Elt v = pi_dagger(T, rel, im);
    for (int k = 0; k < 5; ++k) CHECK(pi_dagger(T, rel, im, &rng) == v);
  }
}

TEST_CASE("Y and X counts agree with explicit tables") {
  struct Case {
    uint32_t ell;
    int cls;
    uint32_t q;
    GammaGroup H;
  };
  std::vector<Case> cases = {{3, 2, 7, inv_elem(3, 1)}, {3, 2, 7, inv_elem(3, 2)}, {3, 2, 2, inv_elem(3, 2)},
                             {5, 3, 11, inv_elem(5, 1)}, {5, 3, 2, inv_elem(5, 2)}};
  std::mt19937_64 rng(11);
  for (auto& cs : cases) {
    DemushkinTrunc D(1, cs.ell, cs.cls, RelatorKind::AllInverses);
    TargetGroup T = make_target(cs.H, cs.ell, cs.cls);
    DeltaTarget d0 = make_delta(T, {});
    uint64_t nonzero = 0;
    const bool q_one = cs.q % cs.ell == 1;
    for (int s = 0; s < 40; ++s) {
      // With q = 1 mod l the first sample is the identity on degree 1, so Y = g.
      ConstrainedAut a = s == 0 && q_one ? gamma_aut_from_params(D, cs.q, FMat::identity(2), {}, D.free().zero())
                                         : sample_constrained_aut(D, cs.q, rng);
      auto tb = build_fixed_quotient(D, a);
      CHECK(tb.X->order() == 2 * tb.Y.group->order());
      YSampleCounts c = count_y_sample(D, a, T, d0);
      CHECK(c.y_sur == count_surjections(*tb.Y.group, *T.H.group, &tb.Y, &T.H));
      CHECK(c.x_sur == table_x_count(tb, T));
      CHECK(c.x_sur == T.H.group->order() * c.y_sur);
      uint64_t total = 0;
      for (auto v : c.y_by_value) total += v;
      CHECK(total == c.y_sur);
      nonzero += c.y_sur > 0;
    }
    if (q_one) CHECK(nonzero > 0);
  }
}

TEST_CASE("Y counts with a conjugated involution agree with explicit tables") {
  std::mt19937_64 rng(23);
  DemushkinTrunc D(1, 3, 2, RelatorKind::AllInverses);
  ConstrainedAut tau = sample_plain_aut(D, rng);
  D.set_sigma_conjugate(tau.psi);
  CHECK(!D.sigma_is_standard());
  for (uint32_t r : {1u, 2u}) {
    TargetGroup T = make_target(inv_elem(3, r), 3, 2);
    for (int s = 0; s < 30; ++s) {
      ConstrainedAut a = sample_constrained_aut(D, 7, rng);
      auto tb = build_fixed_quotient(D, a);
      YSampleCounts c = count_y_sample(D, a, T, make_delta(T, {}));
      CHECK(c.y_sur == count_surjections(*tb.Y.group, *T.H.group, &tb.Y, &T.H));
      CHECK(c.x_sur == table_x_count(tb, T));
    }
  }
}

TEST_CASE("order of Y divides l^2 for n = 1") {
  std::mt19937_64 rng(3);
  DemushkinTrunc D(1, 3, 2, RelatorKind::AllInverses);
  for (int s = 0; s < 50; ++s) {
    auto tb = build_fixed_quotient(D, sample_constrained_aut(D, 7, rng));
    CHECK(9 % tb.Y.group->order() == 0);
  }
}

TEST_CASE("matrix count matches the group count") {
  std::mt19937_64 rng(17);
  TargetGroup T1 = make_target(inv_elem(3, 1), 3, 2);
  TargetGroup T2 = make_target(inv_elem(3, 2), 3, 2);
  DeltaTarget z1 = make_delta(T1, {}), z2 = make_delta(T2, {});
  for (int n : {1, 2, 3}) {
    DemushkinTrunc D(n, 3, 2, RelatorKind::AllInverses);
    for (int s = 0; s < 150; ++s) {
      ConstrainedAut a = sample_constrained_aut(D, 7, rng);
      CHECK(matrix_count(D, a, 1, false) == count_y_sample(D, a, T1, z1, false).y_sur);
      YSampleCounts c2 = count_y_sample(D, a, T2, z2, false);
      CHECK(matrix_count(D, a, 2, false) == c2.y_sur);
      CHECK(matrix_count(D, a, 2, true) == c2.y_delta);
    }
  }
}

TEST_CASE("Y count vanishes for a delta of order not dividing q - 1") {
  std::mt19937_64 rng(29);
  TargetGroup T = make_target(inv_elem(3, 2), 3, 2);
  DeltaTarget d = make_delta(T, {1});
  CHECK(d.order == 3);
  for (int n : {1, 2, 3}) {
    DemushkinTrunc D(n, 3, 2, RelatorKind::AllInverses);
    for (int s = 0; s < 100; ++s) {
      ConstrainedAut a = sample_constrained_aut(D, 2, rng);
      YSampleCounts c = count_y_sample(D, a, T, d);
      CHECK(c.y_delta == 0);
      CHECK(c.x_delta == 0);
    }
  }
}

TEST_CASE("Z count for Z/l matches the abelianization oracle") {
  std::mt19937_64 rng(31);
  GroupPtr Z3 = cyclic_group(3);
  TargetGroup T = make_plain_target(Z3, 3, 2);
  for (int n : {1, 2, 3}) {
    DemushkinTrunc D(n, 3, 2, RelatorKind::Standard);
    const Fp& f = D.field();
    for (int s = 0; s < 100; ++s) {
      ConstrainedAut a = sample_plain_aut(D, rng);
      // Z^ab = F^2n / (A + T A), A spanned by the odd-indexed basis vectors.
      FMat B(2 * n, 2 * n);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < 2 * n; ++k) {
          B(k, i) = k == 2 * i ? 1 : 0;
          B(k, n + i) = a.T(k, 2 * i);
        }
      int codim = 2 * n - static_cast<int>(mat_rank(f, B));
      uint64_t expect = 1;
      for (int i = 0; i < codim; ++i) expect *= 3;
      CHECK(count_z_sample(D, a, T) == expect - 1);
    }
  }
}

TEST_CASE("orbit transitivity") {
  OrbitReport r = orbit_check_exhaustive(3, 7, inv_elem(3, 1));
  CHECK(r.surjections == 8);
  CHECK(r.automorphisms == 24 * 27);
  CHECK(r.witness_failures == 0);
  CHECK(r.transitive);
  OrbitReport w = orbit_check_witness(2, 3, 7, inv_elem(3, 2), 30, 99);
  CHECK(w.pairs_checked == 30);
  CHECK(w.transitive);
  OrbitReport w1 = orbit_check_witness(2, 3, 7, inv_elem(3, 1), 20, 7);
  CHECK(w1.transitive);
}

TEST_CASE("conjugating the involution leaves the moments within 3 standard errors") {
  YMomentConfig c;
  c.n = 2;
  c.q = 7;
  c.H = inv_elem(3, 2);
  c.samples = 4000;
  c.seed = 21;
  YMomentReport a = estimate_moment_y(c);
  c.sigma_conjugate = true;
  c.sigma_seed = 5;
  YMomentReport b = estimate_moment_y(c);
  auto close = [](const MomentEstimate& x, const MomentEstimate& y) {
    double s = std::sqrt(x.stderr_ * x.stderr_ + y.stderr_ * y.stderr_);
    return std::abs(x.mean - y.mean) <= 3.0 * s + 1e-12;
  };
  CHECK(close(a.y_delta, b.y_delta));
  CHECK(close(a.x_delta, b.x_delta));
  CHECK(close(a.y_total, b.y_total));
  CHECK(b.x_minus_index_y.all_zero);
}
