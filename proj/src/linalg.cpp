#include "fraclim/limit/linalg.hpp"
#include "fraclim/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace fraclim::linalg {

Matrix identity(std::size_t n) {
  Matrix m(n, Vector(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix c(n, Vector(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] -= b[i][j];
  return c;
}

namespace {

// reduced row echelon form in place; returns pivot columns
std::vector<std::size_t> rref(Matrix& a) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (auto& v : a[r]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(Matrix a) { return rref(a).size(); }

std::vector<Vector> nullspace(const Matrix& a) {
  Matrix r = a;
  auto pivots = rref(r);
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vector v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Vector> column_basis(const Matrix& a) {
  Matrix r = a;
  auto pivots = rref(r);
  std::vector<Vector> basis;
  for (auto c : pivots) {
    Vector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix inverse(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix aug(n, Vector(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw DomainError("singular matrix");
  Matrix inv(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

Vector charpoly(const Matrix& a) {
  // Faddeev-LeVerrier
  const std::size_t n = a.size();
  Vector c(n + 1, 0);
  c[n] = 1;
  Matrix m(n, Vector(n, 0));
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix am = multiply(a, m);
    for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
    m = std::move(am);
    Matrix t = multiply(a, m);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += t[i][i];
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

Rational evaluate(const Vector& p, const Rational& x) {
  Rational v = 0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

std::size_t divide_out_one(Vector& p) {
  std::size_t mult = 0;
  while (p.size() > 1 && evaluate(p, 1) == 0) {
    // synthetic division by (x - 1)
    const std::size_t d = p.size() - 1;
    Vector q(d, 0);
    Rational carry = 0;
    for (std::size_t i = d; i-- > 0;) {
      carry = p[i + 1] + carry;
      q[i] = carry;
    }
    p = std::move(q);
    ++mult;
  }
  return mult;
}

bool schur_stable(Vector p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (p.empty()) return false;
  while (p.size() > 1) {
    const std::size_t d = p.size() - 1;
    const Rational an = p[d], a0 = p[0];
    if (abs(a0) >= abs(an)) return false;
    // (an p(z) - a0 p*(z)) / z, p*(z) = z^d p(1/z)
    Vector q(d, 0);
    for (std::size_t i = 1; i <= d; ++i) q[i - 1] = an * p[i] - a0 * p[d - i];
    p = std::move(q);
  }
  return p[0] != 0;
}

}  // namespace fraclim::linalg
