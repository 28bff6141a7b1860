#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace ncwass {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline bool is_infinite(double x) { return std::isinf(x); }

// Largest supported matrix dimension (single full matrix algebra M_n).
inline constexpr int kMaxDim = 16;

// Default tolerances used by construction invariants.
namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double psd_floor = -1e-10;
inline constexpr double unitary = 1e-10;
inline constexpr double projection = 1e-9;
inline constexpr double refinement = 1e-9;
inline constexpr double coarsening = 1e-9;
inline constexpr double prob_sum = 1e-10;
inline constexpr double prob_floor = -1e-12;
inline constexpr double gauge_domain = 1e-9;
inline constexpr double metric_triangle = 1e-10;
}  // namespace tol

// Operator norm (largest singular value).
double operator_norm(const Matrix& m);

// Operator norm together with a top singular pair (x, y):
// m * y = sigma * x with ||x|| = ||y|| = 1.
struct TopSingular {
  double sigma;
  Eigen::VectorXcd left;
  Eigen::VectorXcd right;
};
TopSingular top_singular(const Matrix& m);

Matrix commutator(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tolerance = tol::herm);

// Orthonormal basis of the real vector space of Hermitian n x n matrices
// under the trace inner product <A,B> = tr(AB). Ordering: diagonal units
// first, then for each i < j the symmetric and antisymmetric units.
const std::vector<Matrix>& hermitian_basis(int n);

// Coordinates of a Hermitian matrix in hermitian_basis(n).
Vector hermitian_coordinates(const Matrix& f);

Matrix hermitian_from_coordinates(int n, const Vector& v);

}  // namespace ncwass
