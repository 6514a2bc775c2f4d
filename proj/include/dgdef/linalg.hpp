#ifndef DGDEF_LINALG_HPP
#define DGDEF_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "dgdef/rational.hpp"

namespace dgdef {

using Vec = std::vector<Rational>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& at(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  Vec column(std::size_t c) const;
  Vec row(std::size_t r) const;
  Vec apply(const Vec& v) const;
  Matrix operator*(const Matrix& other) const;
  bool is_zero() const;

  static Matrix from_columns(const std::vector<Vec>& columns, std::size_t rows);
  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Fraction-free Bareiss elimination. Rows are scaled to integers first;
// pivots are the first nonzero entry scanning columns left to right.
std::size_t rank(const Matrix& m);

struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};
Echelon rref(const Matrix& m);

std::vector<Vec> nullspace(const Matrix& m);
std::optional<Vec> solve(const Matrix& a, const Vec& b);

// Incremental span membership used for greedy basis choices.
class SpanBuilder {
 public:
  explicit SpanBuilder(std::size_t dim) : dim_(dim) {}
  // Returns true if v was independent of the current span (and adds it).
  bool add(const Vec& v);
  bool contains(const Vec& v) const;
  std::size_t size() const { return rows_.size(); }

 private:
  Vec reduce(Vec v) const;
  std::size_t dim_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace dgdef

#endif
