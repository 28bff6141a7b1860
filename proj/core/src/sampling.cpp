#include "ncwass/sampling.hpp"

#include <Eigen/QR>
#include <cmath>

namespace ncwass {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite
  double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

namespace {
uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}
uint64_t mix(uint64_t a, uint64_t b) {
  uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  return z ^ (z >> 31);
}
}  // namespace

Rng Rng::derive(std::string_view label) const { return Rng(mix(state_, fnv1a(label))); }
Rng Rng::derive(uint64_t salt) const { return Rng(mix(state_, salt)); }

Matrix haar_unitary(int n, Rng& rng) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      g(i, j) = Complex(rng.normal(), rng.normal());
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    Complex phase = a > 0 ? d / a : Complex(1, 0);
    q.col(i) *= phase;
  }
  return q;
}

HermitianElement random_hermitian(int n, Rng& rng, double scale) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      g(i, j) = Complex(rng.normal(), rng.normal());
    }
  }
  return HermitianElement(scale * 0.5 * (g + g.adjoint().eval()));
}

DensityState random_density(int n, Rng& rng) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      g(i, j) = Complex(rng.normal(), rng.normal());
    }
  }
  Matrix w = g * g.adjoint();
  return DensityState(w / w.trace().real());
}

ProbVector random_prob(int k, Rng& rng) {
  Vector p(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    double u = rng.uniform();
    p(i) = -std::log(1.0 - u);
    sum += p(i);
  }
  return ProbVector(p / sum);
}

CommutativeContext random_maximal_context(int n, Rng& rng) {
  return CommutativeContext::maximal(haar_unitary(n, rng));
}

FiniteMetricSpace random_metric_space(int k, Rng& rng) {
  RealMatrix pts(k, 3);
  for (int i = 0; i < k; ++i) {
    for (int d = 0; d < 3; ++d) pts(i, d) = rng.normal();
  }
  RealMatrix dist = RealMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      dist(i, j) = dist(j, i) = (pts.row(i) - pts.row(j)).norm();
    }
  }
  return FiniteMetricSpace(dist);
}

}  // namespace ncwass
