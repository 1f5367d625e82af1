#pragma once

#include <array>
#include <vector>

namespace lyapcert {

/// Symmetric 2x2 matrix, upper triangle stored.
struct Sym2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a12; }
  double max_abs() const;
};

/// Symmetric 3x3 matrix, upper triangle stored.
struct Sym3 {
  double a11 = 0.0, a12 = 0.0, a13 = 0.0;
  double a22 = 0.0, a23 = 0.0, a33 = 0.0;

  double trace() const { return a11 + a22 + a33; }
  double max_abs() const;
};

/// Default eigenvalue tolerance for semidefiniteness tests, relative to
/// max(1, max |entry|). Boundary zeros of exact certificates must pass.
inline constexpr double kDefiniteTol = 1e-9;

/// Eigenvalues in ascending order (closed form).
std::array<double, 2> eigenvalues(const Sym2& s);

/// Eigenvalues in ascending order. Trigonometric solve of the characteristic
/// cubic; falls back to Jacobi sweeps when the discriminant is near zero.
std::array<double, 3> eigenvalues(const Sym3& s);

/// Eigenvalues of a dense symmetric n x n matrix (row-major), ascending.
/// Cyclic Jacobi rotations, at most max_sweeps sweeps.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n, int max_sweeps = 50);

bool is_positive_semidefinite(const Sym2& s, double tol = kDefiniteTol);
bool is_positive_semidefinite(const Sym3& s, double tol = kDefiniteTol);
bool is_negative_semidefinite(const Sym2& s, double tol = kDefiniteTol);
bool is_negative_semidefinite(const Sym3& s, double tol = kDefiniteTol);

/// Dense (3d) x (3d) expansion  hat ⊗ I_d, row-major.
std::vector<double> kron_expand(const Sym3& hat, int d);

/// Checks that the eigenvalue multiset of hat ⊗ I_d equals d copies of the
/// eigenvalues of hat, within tol (scaled by max(1, |lambda|_max)).
bool kron_expand_check(const Sym3& hat, int d, double tol = 1e-10);

}  // namespace lyapcert
