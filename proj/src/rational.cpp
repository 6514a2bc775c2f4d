#include "dgdef/rational.hpp"

#include "dgdef/errors.hpp"

namespace dgdef {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
    throw Error("ParseError", "bad rational literal '" + text + "'");
  }
  q.canonicalize();
  return q;
}

}  // namespace dgdef
