#include <random>

#include "cll/hurwitz.hpp"
#include "doctest.h"

using namespace cll;

namespace {

CSet involutions(GroupPtr G) { return cset_from_spec(G, "order:2"); }

GroupPtr sd_group(uint32_t j) { return semidirect_product(inversion_action(elem_abelian_group(3, j))).group; }

// Independent oracle for the Gamma = Z/2 side: one class, trivial kernel, m = (n) must die in Z/2.
uint64_t b_gamma2_oracle(int64_t n) { return n % 2 == 0 ? 1 : 0; }

}  // namespace

TEST_CASE("d_gcq examples") {
  auto Z2 = cyclic_group(2);
  auto d = make_cset_data(Z2, cset_from_spec(Z2, "all"));
  for (int64_t q : {3, 5, 7, 9}) CHECK(d_gcq(d, q) == 1);
  auto G = sd_group(2);
  auto dg = make_cset_data(G, involutions(G));
  CHECK(dg.num_classes() == 1);
  CHECK(dg.classes[0].size() == 9);
  CHECK(d_gcq(dg, 7) == 1);
  auto S3 = dihedral_group(3);
  auto ds = make_cset_data(S3, cset_from_spec(S3, "order:3"));
  CHECK(ds.num_classes() == 1);
  CHECK(d_gcq(ds, 2) == 1);
  CHECK_THROWS_AS(d_gcq(ds, 3), Error);
  auto Z5 = cyclic_group(5);
  auto d5 = make_cset_data(Z5, cset_from_spec(Z5, "all"));
  CHECK(d5.num_classes() == 4);
  CHECK(d_gcq(d5, 2) == 1);   // 2 generates (Z/5)^x
  CHECK(d_gcq(d5, 4) == 2);   // {1,4}, {2,3}
  CHECK(d_gcq(d5, 11) == 4);  // identity on classes
}

TEST_CASE("w_alpha examples") {
  auto Z2 = cyclic_group(2);
  auto d = make_cset_data(Z2, cset_from_spec(Z2, "all"));
  for (int64_t a : {1, 3, 5}) {
    auto w = w_alpha(d, a);
    CHECK(w[0] == d.cover.total->id());
  }
  auto G = sd_group(2);
  auto dg = make_cset_data(G, involutions(G));
  CHECK(dg.cover.kernel.size() == 3);
  for (int64_t a : {1, 7}) {
    auto w = w_alpha(dg, a);
    CHECK(w[0] == dg.cover.total->id());
  }
}

TEST_CASE("alpha_star is an action and respects lift changes") {
  std::mt19937_64 rng(42);
  struct Case {
    GroupPtr G;
    CSet c;
  };
  auto Z5 = cyclic_group(5);
  auto G2 = sd_group(2);
  auto H = heisenberg_group(3);
  std::vector<Case> cases = {{Z5, cset_from_spec(Z5, "all")},
                             {G2, involutions(G2)},
                             {H, cset_from_spec(H, "all")},
                             {dihedral_group(5), cset_from_spec(dihedral_group(5), "all")}};
  for (auto& cs : cases) {
    auto d = make_cset_data(cs.G, cs.c);
    const FiniteGroup& S = *d.cover.total;
    const uint64_t L = d.unit_modulus;
    std::vector<int64_t> units;
    for (uint64_t a = 1; a <= L; ++a)
      if (std::gcd(a, L) == 1) units.push_back(static_cast<int64_t>(a));
    auto random_z = [&]() {
      KElement z;
      z.h = d.cover.kernel[rng() % d.cover.kernel.size()];
      z.m.resize(d.num_classes());
      for (auto& x : z.m) x = static_cast<int64_t>(rng() % 7);
      return z;
    };
    for (int t = 0; t < 300; ++t) {
      KElement z = random_z();
      CHECK(alpha_star(d, 1, z) == z);
      int64_t a = units[rng() % units.size()], b = units[rng() % units.size()];
      CHECK(alpha_star(d, a * b, z) == alpha_star(d, a, alpha_star(d, b, z)));
    }
    // Alternative representatives and lifts: coordinates change by (h, m) -> (h Z(m), m).
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<Elt> reps, lifts, zc;
      for (const auto& cl : d.classes) {
        Elt x = cl[rng() % cl.size()];
        const auto& fib = d.cover.fibers[x];
        reps.push_back(x);
        lifts.push_back(fib[rng() % fib.size()]);
      }
      auto d2 = make_cset_data(d.cover, cs.c, reps, lifts);
      for (size_t k = 0; k < d.num_classes(); ++k) {
        Elt x = d.class_reps[k];
        zc.push_back(S.mul(S.inv(d.lift[x]), d2.lift[x]));
      }
      auto conv = [&](const KElement& z) {
        KElement o = z;
        for (size_t k = 0; k < z.m.size(); ++k) o.h = S.mul(o.h, S.pow(zc[k], z.m[k]));
        return o;
      };
      for (int t = 0; t < 30; ++t) {
        KElement z = random_z();
        int64_t a = units[rng() % units.size()];
        CHECK(alpha_star(d2, a, conv(z)) == conv(alpha_star(d, a, z)));
      }
      for (int64_t q : {7, 11, 13})
        if (std::gcd<uint64_t, uint64_t>(q, L) == 1)
          for (int64_t n = 0; n <= 8; ++n) CHECK(b_count(d2, q, n) == b_count(d, q, n));
    }
  }
}

TEST_CASE("enumerate_vectors examples") {
  auto Z2 = cyclic_group(2);
  auto d = make_cset_data(Z2, cset_from_spec(Z2, "all"));
  CHECK(enumerate_vectors(d, 3, 5, 0) == std::vector<std::vector<int64_t>>{{5}});
  CHECK(enumerate_vectors(d, 3, 2, 3).empty());
  auto Z3 = cyclic_group(3);
  auto d3 = make_cset_data(Z3, cset_from_spec(Z3, "all"));
  // q = 2 swaps the two classes.
  CHECK(enumerate_vectors(d3, 2, 6, 0) == std::vector<std::vector<int64_t>>{{3, 3}});
  CHECK(enumerate_vectors(d3, 7, 4, 1) == std::vector<std::vector<int64_t>>{{1, 3}, {2, 2}, {3, 1}});
}

TEST_CASE("b_count for Z/2 and the fixed-component count") {
  auto Z2 = cyclic_group(2);
  auto d = make_cset_data(Z2, cset_from_spec(Z2, "all"));
  for (int64_t q : {3, 5, 7, 9})
    for (int64_t n = 0; n <= 20; ++n) {
      CHECK(b_count(d, q, n) == b_gamma2_oracle(n));
      CHECK(count_frobenius_fixed(d, q, n, 0) == b_gamma2_oracle(n));
    }
  CHECK(count_frobenius_fixed(d, 3, 4, 5) == 0);
}

TEST_CASE("delta covers: kernel split and Gamma-side equality") {
  for (uint32_t j : {1u, 2u}) {
    GammaGroup H = inversion_action(elem_abelian_group(3, j));
    DeltaCover dc = make_delta_cover(H, 7);
    // |ker S1| = |ker S'| * |ker S2| equals the reduced Schur covering kernel
    CHECK(dc.d1.cover.kernel.size() == dc.sprime.kernel.size() * dc.d2.cover.kernel.size());
    CHECK(dc.reduced_kernel_order == dc.d1.cover.kernel.size());
    CHECK(dc.sprime.kernel.size() == (j == 1 ? 1u : 3u));
    for (int64_t n = 0; n <= 12; ++n) {
      uint64_t total = 0;
      for (Elt eta : dc.sprime.kernel) {
        uint64_t b = b_count_delta(dc, 7, n, eta);
        CHECK(b == b_count(dc.d2, 7, n));
        total += b;
      }
      CHECK(total == b_count(dc.d1, 7, n));
    }
    // q = 4 is not prime to the involutions in c1
    CHECK_THROWS_AS(b_count(make_delta_cover(H, 4).d1, 4, 2), Error);
  }
}

TEST_CASE("b_count vanishes unless ord(eta) divides q - 1") {
  GammaGroup H = inversion_action(elem_abelian_group(3, 2));
  DeltaCover dc = make_delta_cover(H, 5);
  for (Elt eta : dc.sprime.kernel) {
    if (eta == dc.sprime.total->id()) continue;
    for (int64_t n = 0; n <= 10; ++n) CHECK(b_count_delta(dc, 5, n, eta) == 0);
  }
}
