#include <map>
#include <random>

#include "cll/nilpotent.hpp"
#include "doctest.h"

using namespace cll;

namespace {

FVec random_elt(const FreeNilpotent& F, std::mt19937_64& rng) { return random_vector(F.field(), F.dim(), rng); }

// Finite group on the vectors of L / span(extra) with the BCH product, as an independent table.
GroupPtr table_group(const FreeNilpotent& F, const std::vector<FVec>& extra, std::vector<FVec>& elems,
                     std::map<FVec, Elt>& index) {
  Echelon E(&F.field(), F.dim());
  for (const auto& v : extra) E.insert(v);
  std::vector<size_t> free = E.free_columns();
  size_t total = 1;
  for (size_t i = 0; i < free.size(); ++i) total *= F.ell();
  elems.clear();
  index.clear();
  for (size_t code = 0; code < total; ++code) {
    FVec v = F.zero();
    size_t c = code;
    for (size_t col : free) {
      v[col] = static_cast<uint32_t>(c % F.ell());
      c /= F.ell();
    }
    index[v] = static_cast<Elt>(elems.size());
    elems.push_back(v);
  }
  std::vector<Elt> flat(total * total);
  for (size_t a = 0; a < total; ++a)
    for (size_t b = 0; b < total; ++b) {
      FVec p = F.mul(elems[a], elems[b]);
      E.reduce(p);
      flat[a * total + b] = index.at(p);
    }
  return make_group(FiniteGroup::from_flat(static_cast<uint32_t>(total), flat, index.at(F.zero()), false));
}

// Degree-2 log coordinate of a word, by the closed formula 1/2 sum_{p<q} s_p s_q [e_kp, e_kq].
int64_t deg2_oracle(const Word& w, uint32_t i, uint32_t j, int64_t ell) {
  int64_t twice = 0;
  for (size_t p = 0; p < w.size(); ++p)
    for (size_t q = p + 1; q < w.size(); ++q) {
      int64_t s = w[p].sign * w[q].sign;
      if (w[p].gen == i && w[q].gen == j) twice += s;
      if (w[p].gen == j && w[q].gen == i) twice -= s;
    }
  int64_t half = (ell + 1) / 2;
  return ((twice % ell + ell) % ell) * half % ell;
}

}  // namespace

TEST_CASE("word parser") {
  CHECK(word_to_string(parse_word("[x1,x2]")) == "~x1~x2x1x2");
  CHECK(word_to_string(parse_word("x1^-2 x3")) == "~x1~x1x3");
  CHECK(word_to_string(parse_word("~(x1x2)")) == "~x2~x1");
  CHECK(word_to_string(standard_relator(2)) == "~x1~x2x1x2~x3~x4x3x4");
  CHECK(word_to_string(all_inverses_relator(3)) == "~x1~x2~x3x1x2x3");
  CHECK_THROWS_AS(parse_word("x0"), Error);
  CHECK_THROWS_AS(parse_word("[x1 x2"), Error);
}

TEST_CASE("Hall basis dimensions") {
  for (int m = 2; m <= 8; ++m) {
    FreeNilpotent F(m, 3, 5);
    CHECK(F.dim2() == static_cast<size_t>(m * (m - 1) / 2));
    CHECK(F.dim3() == static_cast<size_t>((m * m * m - m) / 3));
  }
  CHECK_THROWS_AS(FreeNilpotent(2, 3, 3), Error);
  CHECK_THROWS_AS(FreeNilpotent(2, 2, 4), Error);
}

TEST_CASE("BCH product is a group law") {
  std::mt19937_64 rng(7);
  for (int cls : {2, 3}) {
    FreeNilpotent F(4, cls, 5);
    for (int trial = 0; trial < 200; ++trial) {
      FVec a = random_elt(F, rng), b = random_elt(F, rng), c = random_elt(F, rng);
      CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
      CHECK(F.mul(a, F.inv(a)) == F.zero());
      CHECK(F.mul(a, F.scale(a, 2)) == F.scale(a, 3));
    }
  }
  FreeNilpotent F(3, 2, 3);
  FVec c = F.comm(F.gen(0), F.gen(2));
  CHECK(c == F.bracket(F.gen(0), F.gen(2)));
}

TEST_CASE("Jacobi identity for the bracket") {
  std::mt19937_64 rng(11);
  FreeNilpotent F(5, 3, 7);
  for (int trial = 0; trial < 200; ++trial) {
    FVec a = random_elt(F, rng), b = random_elt(F, rng), c = random_elt(F, rng);
    FVec j = F.add(F.add(F.bracket(F.bracket(a, b), c), F.bracket(F.bracket(b, c), a)), F.bracket(F.bracket(c, a), b));
    CHECK(j == F.zero());
    CHECK(F.bracket(a, b) == F.scale(F.bracket(b, a), 6));
  }
}

TEST_CASE("Mal'cev evaluation agrees with word evaluation") {
  std::mt19937_64 rng(3);
  SUBCASE("class 2 in Heis(5)") {
    auto H = heisenberg_group(5);
    FreeNilpotent F(2, 2, 5);
    std::vector<Elt> img = H->gens();
    for (int trial = 0; trial < 100; ++trial) {
      Word w;
      for (int k = 0; k < 12; ++k) w.push_back({static_cast<uint32_t>(rng() % 2), rng() % 2 ? 1 : -1});
      CHECK(F.eval_in(*H, img, F.eval(w)) == eval_word(*H, img, w));
    }
  }
  SUBCASE("class 3 in a quotient of the free group") {
    FreeNilpotent F(2, 3, 5);
    std::vector<FVec> elems;
    std::map<FVec, Elt> index;
    FVec kill = F.zero();
    kill[F.idx3(0, 1, 1)] = 1;
    auto G = table_group(F, {kill}, elems, index);
    CHECK(G->order() == 625);
    std::vector<Elt> img{index.at(F.gen(0)), index.at(F.gen(1))};
    for (int trial = 0; trial < 100; ++trial) {
      Word w;
      for (int k = 0; k < 14; ++k) w.push_back({static_cast<uint32_t>(rng() % 2), rng() % 2 ? 1 : -1});
      CHECK(F.eval_in(*G, img, F.eval(w)) == eval_word(*G, img, w));
    }
  }
}

TEST_CASE("relator matrix anchors") {
  for (uint32_t ell : {3u, 5u, 7u}) {
    for (int m : {2, 4, 6}) {
      FreeNilpotent F(m, 2, ell);
      Word w = all_inverses_relator(m);
      FMat M = relator_matrix(F, F.eval(w));
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          int64_t a = deg2_oracle(w, i, j, ell);
          CHECK(M(j, i) == a);
          CHECK(M(i, j) == (ell - a) % ell);
        }
    }
  }
  FreeNilpotent F(2, 2, 3);
  FMat M = relator_matrix(F, F.eval(standard_relator(1)));
  CHECK(M(0, 1) == 2);
  CHECK(M(1, 0) == 1);
  CHECK_THROWS_AS(relator_matrix(F, F.gen(0)), Error);
}

TEST_CASE("Demushkin truncation orders") {
  DemushkinTrunc D(1, 3, 2);
  CHECK(D.gtilde_log_order() == 3);
  CHECK(D.g_log_order() == 2);
  DemushkinTrunc D2(2, 3, 2);
  CHECK(D2.gtilde_log_order() == 10);
  DemushkinTrunc D3(1, 5, 3);
  CHECK(D3.gtilde_log_order() == 3);
  DemushkinTrunc D4(2, 5, 3);
  // 4 + 6 + 20 minus the 4-dimensional span of [xi_2, e_j]
  CHECK(D4.gtilde_log_order() == 26);
  for (const DemushkinTrunc* d : {&D, &D2, &D3, &D4}) {
    CHECK(d->sigma(d->xi()) == d->xi());
    for (int i = 0; i < d->m(); ++i) CHECK(d->sigma(d->free().gen(i)) == d->free().scale(d->free().gen(i), d->field().p - 1));
  }
}

TEST_CASE("constrained automorphism samplers verify") {
  std::mt19937_64 rng(19);
  for (int n : {1, 2, 3}) {
    DemushkinTrunc D(n, 3, 2);
    for (uint32_t q : {1u, 2u, 4u, 7u})
      for (int k = 0; k < 10; ++k) CHECK_NOTHROW(sample_constrained_aut(D, q, rng, true));
  }
  for (int n : {1, 2}) {
    DemushkinTrunc D(n, 5, 3);
    for (uint32_t q : {2u, 3u, 4u})
      for (int k = 0; k < 5; ++k) CHECK_NOTHROW(sample_constrained_aut(D, q, rng, true));
    DemushkinTrunc Z(n, 5, 3, RelatorKind::Standard);
    for (int k = 0; k < 5; ++k) CHECK_NOTHROW(sample_plain_aut(Z, rng, true));
  }
  DemushkinTrunc Z(2, 3, 2, RelatorKind::Standard);
  for (int k = 0; k < 10; ++k) CHECK_NOTHROW(sample_plain_aut(Z, rng, true));
}

TEST_CASE("conjugated involution") {
  std::mt19937_64 rng(23);
  DemushkinTrunc D(2, 3, 2);
  ConstrainedAut tau = sample_plain_aut(D, rng, true);
  D.set_sigma_conjugate(tau.psi);
  CHECK_FALSE(D.sigma_is_standard());
  for (int k = 0; k < 10; ++k) CHECK_NOTHROW(sample_constrained_aut(D, 2, rng, true));
}

TEST_CASE("similitudes of the rank-2 form") {
  Fp F(3);
  DemushkinTrunc D(1, 3, 2);
  for (uint32_t q : {1u, 2u}) {
    auto all = enumerate_similitudes(F, D.form(), q);
    CHECK(all.size() == 24);
    std::map<FVec, int> counts;
    for (const auto& M : all) counts[M.a] = 0;
    std::mt19937_64 rng(q);
    const int N = 24000;
    for (int s = 0; s < N; ++s) {
      FMat M = sample_similitude(F, D.form(), q, rng);
      REQUIRE(counts.count(M.a) == 1);
      counts[M.a]++;
    }
    double chi2 = 0, e = static_cast<double>(N) / 24;
    for (auto& [k, c] : counts) chi2 += (c - e) * (c - e) / e;
    // 23 degrees of freedom, 0.999 quantile is about 49.7
    CHECK(chi2 < 49.7);
  }
}

TEST_CASE("q-symplectic completion yields a similitude witness") {
  Fp F(3);
  std::mt19937_64 rng(5);
  DemushkinTrunc D(3, 3, 2);
  const FMat& J = D.form();
  for (int trial = 0; trial < 50; ++trial) {
    uint32_t q = 1 + rng() % 2;
    FMat M0 = sample_similitude(F, J, q, rng);
    size_t k = 1 + rng() % 4;
    std::vector<FVec> a2;
    Echelon E(&F, 6);
    while (a2.size() < k) {
      FVec v = random_vector(F, 6, rng);
      if (E.insert(v)) a2.push_back(v);
    }
    std::vector<FVec> a1;
    for (const auto& v : a2) a1.push_back(mat_vec(F, M0, v));
    FMat G1(k, k);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) G1(i, j) = beta(F, J, a1[i], a1[j]);
    FMat B1 = q_symplectic_completion(F, J, a1, G1, q);
    FMat B2 = symplectic_completion(F, J, a2, 1);
    FMat B2i;
    REQUIRE(mat_inverse(F, B2, B2i));
    FMat M = mat_mul(F, B1, B2i);
    FMat Jq = J;
    for (auto& x : Jq.a) x = F.mul(x, q);
    CHECK(mat_mul(F, mat_mul(F, M.transpose(), J), M) == Jq);
    for (size_t i = 0; i < k; ++i) CHECK(mat_vec(F, M, a2[i]) == a1[i]);
  }
  FMat bad(1, 1);
  bad(0, 0) = 1;
  CHECK_THROWS_AS(q_symplectic_completion(F, J, {FVec{1, 0, 0, 0, 0, 0}}, bad, 1), Error);
}

TEST_CASE("pairing image in Heis(3)") {
  auto H = heisenberg_group(3);
  auto g = H->gens();
  PairingImage p = pairing_image(H, g, parse_word("[x1,x2]"), 3, 1);
  CHECK(p.b[0][1] == 1);
  CHECK(p.f[0][1] == 2);
  CHECK(p.f[1][0] == 1);
  PairingImage q = pairing_image_element(H, g, H->comm(g[0], g[1]), 3, 2);
  CHECK(q.modulus == 9);
  CHECK(q.dual_log[0] == 3);
  CHECK(q.f[0][1] == 0);
  CHECK_THROWS_AS(pairing_image(H, g, parse_word("x1"), 3, 1), Error);
  try {
    pairing_image_element(H, g, g[0], 3, 1);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Err::NotCentral);
  }
}
