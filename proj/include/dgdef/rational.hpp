#ifndef DGDEF_RATIONAL_HPP
#define DGDEF_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace dgdef {

using Rational = mpq_class;
using Integer = mpz_class;

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

}  // namespace dgdef

#endif
