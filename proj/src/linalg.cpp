#include "dgdef/linalg.hpp"

#include <algorithm>
#include <utility>

namespace dgdef {

Vec Matrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

Vec Matrix::row(std::size_t r) const {
  return Vec(data_.begin() + static_cast<long>(r * cols_),
             data_.begin() + static_cast<long>((r + 1) * cols_));
}

Vec Matrix::apply(const Vec& v) const {
  Vec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (sgn(at(r, c)) != 0 && sgn(v[c]) != 0) out[r] += at(r, c) * v[c];
    }
  }
  return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
  Matrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      if (sgn(at(r, k)) == 0) continue;
      for (std::size_t c = 0; c < other.cols_; ++c) {
        if (sgn(other.at(k, c)) != 0) out.at(r, c) += at(r, k) * other.at(k, c);
      }
    }
  }
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Rational& q) { return sgn(q) == 0; });
}

Matrix Matrix::from_columns(const std::vector<Vec>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = columns[c][r];
  }
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

std::size_t rank(const Matrix& m) {
  const std::size_t nr = m.rows();
  const std::size_t nc = m.cols();
  std::vector<std::vector<Integer>> a(nr, std::vector<Integer>(nc));
  for (std::size_t r = 0; r < nr; ++r) {
    Integer l = 1;
    for (std::size_t c = 0; c < nc; ++c) {
      if (sgn(m.at(r, c)) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(r, c).get_den_mpz_t());
    }
    for (std::size_t c = 0; c < nc; ++c) {
      if (sgn(m.at(r, c)) != 0) a[r][c] = m.at(r, c).get_num() * (l / m.at(r, c).get_den());
    }
  }
  std::size_t row = 0;
  Integer prev = 1;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t piv = row;
    while (piv < nr && sgn(a[piv][col]) == 0) ++piv;
    if (piv == nr) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t r = row + 1; r < nr; ++r) {
      for (std::size_t c = col + 1; c < nc; ++c) {
        Integer v = a[row][col] * a[r][c] - a[r][col] * a[row][c];
        a[r][c] = v / prev;  // exact by Sylvester's identity
      }
      a[r][col] = 0;
    }
    prev = a[row][col];
    ++row;
  }
  return row;
}

Echelon rref(const Matrix& m) {
  Echelon e{m, {}};
  Matrix& a = e.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && sgn(a.at(piv, col)) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a.at(piv, c), a.at(row, c));
    }
    Rational inv = 1 / a.at(row, col);
    for (std::size_t c = col; c < a.cols(); ++c) {
      if (sgn(a.at(row, c)) != 0) a.at(row, c) *= inv;
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || sgn(a.at(r, col)) == 0) continue;
      Rational f = a.at(r, col);
      for (std::size_t c = col; c < a.cols(); ++c) {
        if (sgn(a.at(row, c)) != 0) a.at(r, c) -= f * a.at(row, c);
      }
    }
    e.pivots.push_back(col);
    ++row;
  }
  return e;
}

std::vector<Vec> nullspace(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      v[e.pivots[r]] = -e.reduced.at(r, free);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(const Matrix& a, const Vec& b) {
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  Echelon e = rref(aug);
  Vec x(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    x[e.pivots[r]] = e.reduced.at(r, a.cols());
  }
  return x;
}

Vec SpanBuilder::reduce(Vec v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Rational& f = v[pivots_[i]];
    if (sgn(f) == 0) continue;
    Rational k = f;
    for (std::size_t c = 0; c < dim_; ++c) {
      if (sgn(rows_[i][c]) != 0) v[c] -= k * rows_[i][c];
    }
  }
  return v;
}

bool SpanBuilder::add(const Vec& v) {
  Vec r = reduce(v);
  std::size_t p = 0;
  while (p < dim_ && sgn(r[p]) == 0) ++p;
  if (p == dim_) return false;
  Rational inv = 1 / r[p];
  for (auto& x : r) x *= inv;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Rational f = rows_[i][p];
    if (sgn(f) == 0) continue;
    for (std::size_t c = 0; c < dim_; ++c) {
      if (sgn(r[c]) != 0) rows_[i][c] -= f * r[c];
    }
  }
  rows_.push_back(std::move(r));
  pivots_.push_back(p);
  return true;
}

bool SpanBuilder::contains(const Vec& v) const {
  Vec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Rational& q) { return sgn(q) == 0; });
}

}  // namespace dgdef
