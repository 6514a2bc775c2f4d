#ifndef DGDEF_TESTS_SUPPORT_HPP
#define DGDEF_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "dgdef/algebra.hpp"

namespace dgdef::testing {

inline Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

// Random homogeneous element of the given degree built from basis monomials.
inline Element random_homogeneous(const AlgPtr& a, int degree, int max_wordlen,
                                  std::mt19937_64& rng, int max_terms = 4) {
  auto basis = a->basis(degree, max_wordlen);
  Element e = a->zero();
  if (basis.empty()) return e;
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> count(1, max_terms);
  int n = count(rng);
  for (int i = 0; i < n; ++i) e += small_rational(rng) * a->monomial(basis[pick(rng)]);
  return e;
}

}  // namespace dgdef::testing

#endif
