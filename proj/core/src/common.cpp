#include "ncwass/common.hpp"

#include <Eigen/SVD>
#include <map>
#include <mutex>

#include "ncwass/errors.hpp"

namespace ncwass {

double operator_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

TopSingular top_singular(const Matrix& m) {
  if (m.rows() == 1 && m.cols() == 1) {
    double s = std::abs(m(0, 0));
    Complex phase = s > 0 ? m(0, 0) / s : Complex(1, 0);
    Eigen::VectorXcd x(1), y(1);
    x(0) = phase;
    y(0) = Complex(1, 0);
    return {s, x, y};
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

bool is_hermitian(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

const std::vector<Matrix>& hermitian_basis(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<Matrix>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Matrix s = Matrix::Zero(n, n);
      s(i, j) = inv_sqrt2;
      s(j, i) = inv_sqrt2;
      basis.push_back(s);
      Matrix a = Matrix::Zero(n, n);
      a(i, j) = Complex(0, inv_sqrt2);
      a(j, i) = Complex(0, -inv_sqrt2);
      basis.push_back(a);
    }
  }
  return cache.emplace(n, std::move(basis)).first->second;
}

Vector hermitian_coordinates(const Matrix& f) {
  const int n = static_cast<int>(f.rows());
  const auto& basis = hermitian_basis(n);
  Vector v(basis.size());
  for (size_t a = 0; a < basis.size(); ++a) {
    v(static_cast<int>(a)) = (f * basis[a]).trace().real();
  }
  return v;
}

Matrix hermitian_from_coordinates(int n, const Vector& v) {
  const auto& basis = hermitian_basis(n);
  if (static_cast<size_t>(v.size()) != basis.size()) {
    throw ValidationError("DimensionMismatch",
                          "coordinate vector does not match basis size");
  }
  Matrix f = Matrix::Zero(n, n);
  for (size_t a = 0; a < basis.size(); ++a) {
    f += v(static_cast<int>(a)) * basis[a];
  }
  return f;
}

}  // namespace ncwass
