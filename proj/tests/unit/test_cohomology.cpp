#include "cll/cohomology.hpp"
#include "doctest.h"

using namespace cll;

TEST_CASE("H2 of cyclic group") {
  auto r = h2(cyclic_group(3), 3, 2);
  CHECK(r.structure.factors == std::vector<uint64_t>{3});
  for (auto& c : r.basis) {
    CHECK(c.is_normalized());
    CHECK(c.is_cocycle());
  }
}

TEST_CASE("Schur multipliers") {
  CHECK(schur_multiplier_l(cyclic_group(9), 3).factors.empty());
  CHECK(schur_multiplier_l(elem_abelian_group(3, 2), 3).factors == std::vector<uint64_t>{3});
  CHECK(schur_multiplier_l(heisenberg_group(3), 3).factors == std::vector<uint64_t>{3, 3});
  CHECK(schur_multiplier_l(elem_abelian_group(3, 3), 3).factors == std::vector<uint64_t>{3, 3, 3});
  CHECK(schur_multiplier_l(elem_abelian_group(2, 2), 2).factors == std::vector<uint64_t>{2});
  CHECK(schur_multiplier_l(dihedral_group(4), 2).factors == std::vector<uint64_t>{2});
  CHECK(schur_multiplier_l(dihedral_group(3), 3).factors.empty());
}

TEST_CASE("cover of (Z/3)^2 x| Z/2") {
  auto sd = semidirect_product(inversion_action(elem_abelian_group(3, 2)));
  auto S = schur_cover(sd.group);
  CHECK(S.total->order() == 54);
  CHECK(S.central_verified);
  CHECK(S.stem_verified);
}

TEST_CASE("cover of Heisenberg group") {
  auto S = l_schur_cover(heisenberg_group(3), 3);
  CHECK(S.total->order() == 243);
  CHECK(S.stem_verified);
}
