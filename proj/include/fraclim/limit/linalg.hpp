#pragma once

#include "fraclim/numeric.hpp"

#include <vector>

// Small dense exact linear algebra over Q.
namespace fraclim::linalg {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;

Matrix identity(std::size_t n);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
std::size_t rank(Matrix a);
// basis of {v : a v = 0}, as columns
std::vector<Vector> nullspace(const Matrix& a);
// basis of the column space, as columns
std::vector<Vector> column_basis(const Matrix& a);
Matrix inverse(const Matrix& a);  // throws DomainError when singular

// characteristic polynomial det(xI - a), coefficients c[0] + c[1] x + ... + c[n] x^n
Vector charpoly(const Matrix& a);
Rational evaluate(const Vector& p, const Rational& x);
// strips factors (x - 1); returns the multiplicity
std::size_t divide_out_one(Vector& p);
// every root strictly inside the unit disk (Schur-Cohn)
bool schur_stable(Vector p);

}  // namespace fraclim::linalg
