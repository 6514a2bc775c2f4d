#ifndef DGDEF_ERRORS_HPP
#define DGDEF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dgdef {

// Every failure carries a stable kind tag (DSquareNonzero, ChainMapFailure, ...)
// so reports and bindings can match on it.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("ParseError", "line " + std::to_string(line) + ", column " +
                                std::to_string(column) + ": " + message),
        detail_(message),
        line_(line),
        column_(column) {}
  const std::string& detail() const { return detail_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

class ChainMapFailure : public Error {
 public:
  ChainMapFailure(std::string generator, std::string defect)
      : Error("ChainMapFailure",
              "d f - f d is nonzero on " + generator + ": " + defect),
        generator_(std::move(generator)),
        defect_(std::move(defect)) {}
  const std::string& generator() const { return generator_; }
  const std::string& defect() const { return defect_; }

 private:
  std::string generator_;
  std::string defect_;
};

}  // namespace dgdef

#endif
