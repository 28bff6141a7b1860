#include "ncwass/gauge.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace ncwass {

namespace {

void validate_metric_matrix(const RealMatrix& dist, bool allow_zero_offdiag,
                            double tri_tol) {
  const int k = static_cast<int>(dist.rows());
  if (dist.cols() != k || k < 1) {
    throw ValidationError("BadMetric", "metric matrix must be square");
  }
  for (int i = 0; i < k; ++i) {
    if (std::abs(dist(i, i)) > 0.0) {
      throw ValidationError("BadMetric", "metric diagonal must be zero");
    }
    for (int j = 0; j < k; ++j) {
      if (dist(i, j) != dist(j, i)) {
        throw ValidationError("BadMetric", "metric must be symmetric");
      }
      if (dist(i, j) < 0.0) {
        throw ValidationError("BadMetric", "metric entries must be nonnegative");
      }
      if (i != j && !allow_zero_offdiag && dist(i, j) <= 0.0) {
        throw ValidationError("BadMetric",
                              "metric off-diagonal entries must be positive");
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) {
        if (dist(i, j) > dist(i, l) + dist(l, j) + tri_tol) {
          std::ostringstream os;
          os << "triangle inequality fails at (" << i << "," << j << "," << l
             << "): " << dist(i, j) << " > " << dist(i, l) + dist(l, j);
          throw ValidationError("BadMetric", os.str());
        }
      }
    }
  }
}

}  // namespace

LipGauge LipGauge::multi_commutator(std::vector<HermitianElement> diracs) {
  if (diracs.empty()) {
    throw ValidationError("BadGauge", "multi-commutator gauge needs at least one Dirac");
  }
  const int n = diracs[0].dim();
  for (const auto& d : diracs) {
    if (d.dim() != n) {
      throw ValidationError("DimensionMismatch", "Dirac dimensions differ");
    }
  }
  LipGauge g;
  g.variant_ = Variant::MultiCommutator;
  g.n_ = n;
  g.diracs_ = std::move(diracs);
  return g;
}

LipGauge LipGauge::finite_metric(CommutativeContext base, RealMatrix dist) {
  if (static_cast<int>(dist.rows()) != base.block_count()) {
    throw ValidationError("ArityMismatch",
                          "metric arity does not match context block count");
  }
  validate_metric_matrix(dist, /*allow_zero_offdiag=*/false, 1e-12);
  LipGauge g;
  g.variant_ = Variant::FiniteMetric;
  g.n_ = base.dim();
  g.base_ = std::move(base);
  g.dist_ = std::move(dist);
  return g;
}

double eval_gauge(const LipGauge& gauge, const Matrix& f) {
  if (static_cast<int>(f.rows()) != gauge.dim() ||
      static_cast<int>(f.cols()) != gauge.dim()) {
    throw ValidationError("DimensionMismatch", "element dimension differs from gauge");
  }
  if (gauge.variant() == LipGauge::Variant::MultiCommutator) {
    double value = 0.0;
    for (const auto& d : gauge.diracs()) {
      value = std::max(value, operator_norm(commutator(d.entries(), f)));
    }
    return value;
  }

  // FiniteMetric: f must lie in the base context's subalgebra
  const auto& base = gauge.base_context();
  const int k = base.block_count();
  Vector w(k);
  Matrix recon = Matrix::Zero(gauge.dim(), gauge.dim());
  for (int i = 0; i < k; ++i) {
    double rank = base.projection(i).trace().real();
    w(i) = (f * base.projection(i)).trace().real() / rank;
    recon += w(i) * base.projection(i);
  }
  if (operator_norm(f - recon) > tol::gauge_domain) return kInf;

  double value = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      value = std::max(value, std::abs(w(i) - w(j)) / gauge.dist()(i, j));
    }
  }
  return value;
}

double eval_gauge(const LipGauge& gauge, const HermitianElement& f) {
  return eval_gauge(gauge, f.entries());
}

GaugeReport check_axioms_fn(const std::function<double(const Matrix&)>& fn,
                            const std::function<Matrix(Rng&)>& sample,
                            int sample_count, uint64_t seed) {
  if (sample_count < 1) {
    throw ValidationError("BadSampleCount", "sample_count must be >= 1");
  }
  GaugeReport report;
  report.samples = sample_count;
  Rng rng = Rng(seed).derive("gauge-axioms");

  {
    // L(1) = 0; dimension probed from one sample
    Matrix first = sample(rng);
    Matrix id = Matrix::Identity(first.rows(), first.cols());
    double unit = fn(id);
    if (!(unit <= 1e-10)) {
      report.sampled_violations.push_back({"unit", "identity", unit});
    }
  }

  for (int s = 0; s < sample_count; ++s) {
    Matrix f = sample(rng);
    Matrix g = sample(rng);
    double a = 4.0 * rng.normal();
    double lf = fn(f);
    double lg = fn(g);

    if (std::isfinite(lf)) {
      double laf = fn(a * f);
      double expected = std::abs(a) * lf;
      double err = std::abs(laf - expected);
      if (err > 1e-8 * (1.0 + lf)) {
        std::ostringstream os;
        os << "sample " << s << ", scalar " << a;
        report.sampled_violations.push_back({"homogeneity", os.str(), err});
      }
    }
    if (std::isfinite(lf) && std::isfinite(lg)) {
      double lsum = fn(f + g);
      double excess = lsum - (lf + lg);
      if (excess > 1e-8) {
        std::ostringstream os;
        os << "sample " << s;
        report.sampled_violations.push_back({"subadditivity", os.str(), excess});
      }
    }
  }
  return report;
}

GaugeReport check_axioms(const LipGauge& gauge, int sample_count, uint64_t seed) {
  const int n = gauge.dim();
  std::function<Matrix(Rng&)> sample;
  if (gauge.variant() == LipGauge::Variant::MultiCommutator) {
    sample = [n](Rng& rng) {
      Matrix g(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          g(i, j) = Complex(rng.normal(), rng.normal());
        }
      }
      return Matrix(0.5 * (g + g.adjoint()));
    };
  } else {
    const CommutativeContext base = gauge.base_context();
    sample = [base](Rng& rng) {
      Vector v(base.block_count());
      for (int i = 0; i < v.size(); ++i) v(i) = rng.normal();
      return base.element(v);
    };
  }
  auto fn = [&gauge](const Matrix& f) { return eval_gauge(gauge, f); };
  return check_axioms_fn(fn, sample, sample_count, seed);
}

GaugeReport null_space(const LipGauge& gauge) {
  if (gauge.variant() != LipGauge::Variant::MultiCommutator) {
    throw ValidationError("UnsupportedVariant",
                          "null_space requires a multi-commutator gauge");
  }
  const int n = gauge.dim();
  const auto& basis = hermitian_basis(n);
  const int m = static_cast<int>(basis.size());

  // joint-commutant linear system over Hermitian coordinates
  const long rows_per = 2L * n * n;
  RealMatrix sys(rows_per * gauge.diracs().size(), m);
  for (int a = 0; a < m; ++a) {
    long at = 0;
    for (const auto& d : gauge.diracs()) {
      Matrix c = commutator(d.entries(), basis[a]);
      for (int col = 0; col < n; ++col) {
        for (int row = 0; row < n; ++row) {
          sys(at++, a) = c(row, col).real();
          sys(at++, a) = c(row, col).imag();
        }
      }
    }
  }
  Eigen::BDCSVD<RealMatrix> svd(sys, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  double cutoff = std::max(sv.size() > 0 ? 1e-12 * sv(0) : 0.0, 1e-14);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  GaugeReport report;
  for (int j = rank; j < svd.matrixV().cols(); ++j) {
    report.null_space_basis.emplace_back(
        hermitian_from_coordinates(n, svd.matrixV().col(j)));
  }
  report.is_only_constants = report.null_space_basis.size() == 1;
  return report;
}

RestrictedGauge restrict_gauge(const LipGauge& gauge,
                               const CommutativeContext& alpha) {
  if (gauge.dim() != alpha.dim()) {
    throw ValidationError("DimensionMismatch",
                          "gauge and context dimensions differ");
  }
  RestrictedGauge rg;
  rg.k_ = alpha.block_count();

  if (gauge.variant() == LipGauge::Variant::MultiCommutator) {
    rg.kind_ = RestrictedGauge::Kind::Spectral;
    for (const auto& d : gauge.diracs()) {
      std::vector<Matrix> row;
      row.reserve(alpha.block_count());
      for (int i = 0; i < alpha.block_count(); ++i) {
        row.push_back(commutator(d.entries(), alpha.projection(i)));
      }
      rg.maps_.push_back(std::move(row));
    }
    return rg;
  }

  // FiniteMetric: finite on the context iff alpha is a subalgebra of the
  // base context; coefficients pull back along the block-merge map.
  auto merge = is_refinement(alpha, gauge.base_context());
  if (!merge) {
    rg.kind_ = RestrictedGauge::Kind::ConstantsOnly;
    return rg;
  }
  rg.kind_ = RestrictedGauge::Kind::Polyhedral;
  const int kb = gauge.base_context().block_count();
  RealMatrix eff = RealMatrix::Constant(rg.k_, rg.k_, kInf);
  for (int a = 0; a < kb; ++a) {
    for (int b = 0; b < kb; ++b) {
      if (a == b) continue;
      int i = (*merge)[a], j = (*merge)[b];
      if (i == j) continue;
      eff(i, j) = std::min(eff(i, j), gauge.dist()(a, b));
    }
  }
  for (int i = 0; i < rg.k_; ++i) {
    for (int j = i + 1; j < rg.k_; ++j) {
      if (std::isfinite(eff(i, j))) rg.pairs_.push_back({i, j, eff(i, j)});
    }
  }
  return rg;
}

double RestrictedGauge::eval(const Vector& v) const {
  if (static_cast<int>(v.size()) != k_) {
    throw ValidationError("ArityMismatch",
                          "coefficient vector does not match context");
  }
  switch (kind_) {
    case Kind::Spectral: {
      double value = 0.0;
      for (const auto& row : maps_) {
        Matrix sum = Matrix::Zero(row[0].rows(), row[0].cols());
        for (int i = 0; i < k_; ++i) sum += v(i) * row[i];
        value = std::max(value, operator_norm(sum));
      }
      return value;
    }
    case Kind::Polyhedral: {
      double value = 0.0;
      for (const auto& p : pairs_) {
        value = std::max(value, std::abs(v(p.i) - v(p.j)) / p.d);
      }
      return value;
    }
    case Kind::ConstantsOnly: {
      double spread = v.maxCoeff() - v.minCoeff();
      return spread <= 1e-12 ? 0.0 : kInf;
    }
  }
  return kInf;
}

LatticeReport check_lattice_inequality(const LipGauge& gauge,
                                       const CommutativeContext& alpha,
                                       int sample_count, uint64_t seed) {
  RestrictedGauge rg = restrict_gauge(gauge, alpha);
  LatticeReport report;
  report.samples = sample_count;
  Rng rng = Rng(seed).derive("lattice");
  const int k = alpha.block_count();
  for (int s = 0; s < sample_count; ++s) {
    Vector v(k), w(k);
    for (int i = 0; i < k; ++i) v(i) = rng.normal();
    for (int i = 0; i < k; ++i) w(i) = rng.normal();
    double lv = rg.eval(v);
    double lw = rg.eval(w);
    double bound = std::max(lv, lw);
    if (is_infinite(bound)) continue;
    double lsup = rg.eval(v.cwiseMax(w));
    double excess = lsup - bound;
    if (excess > 1e-8) {
      report.violations.push_back({v, w, excess});
      report.max_excess = std::max(report.max_excess, excess);
    }
  }
  report.pass = report.violations.empty();
  return report;
}

SolidityReport solidity_probe(const LipGauge& gauge,
                              const std::vector<CommutativeContext>& contexts) {
  SolidityReport report;
  for (const auto& alpha : contexts) {
    if (!alpha.is_maximal()) {
      throw ValidationError("NonMaximalContext",
                            "solidity probe requires maximal contexts");
    }
    RestrictedGauge rg = restrict_gauge(gauge, alpha);
    SolidityReport::PerContext pc{};
    const int k = alpha.block_count();
    if (rg.kind() == RestrictedGauge::Kind::Spectral) {
      pc.finite = true;
      // kernel of the stacked coefficient maps over R^k
      const int n = alpha.dim();
      RealMatrix sys(2L * n * n * rg.maps().size(), k);
      for (int i = 0; i < k; ++i) {
        long at = 0;
        for (const auto& row : rg.maps()) {
          const Matrix& c = row[i];
          for (int col = 0; col < n; ++col) {
            for (int r = 0; r < n; ++r) {
              sys(at++, i) = c(r, col).real();
              sys(at++, i) = c(r, col).imag();
            }
          }
        }
      }
      Eigen::BDCSVD<RealMatrix> svd(sys);
      const Vector& sv = svd.singularValues();
      double cutoff = std::max(sv.size() > 0 ? 1e-12 * sv(0) : 0.0, 1e-14);
      int rank = 0;
      while (rank < sv.size() && sv(rank) > cutoff) ++rank;
      pc.restricted_null_dim = k - rank;
      pc.separates = pc.restricted_null_dim == 1;
    } else if (rg.kind() == RestrictedGauge::Kind::Polyhedral) {
      pc.finite = true;
      pc.restricted_null_dim = 1;
      pc.separates = true;  // metric positivity
    } else {
      pc.finite = false;
      pc.restricted_null_dim = k;
      pc.separates = false;
    }
    report.contexts.push_back(pc);
  }
  if (gauge.variant() == LipGauge::Variant::MultiCommutator) {
    // finite-valued gauges are solid; separation verdicts stay recorded
    report.solid = true;
  } else {
    report.solid = true;
    for (const auto& pc : report.contexts) {
      report.solid = report.solid && pc.finite && pc.separates;
    }
  }
  return report;
}

LipGauge induced_point_gauge(const RealMatrix& dist) {
  validate_metric_matrix(dist, /*allow_zero_offdiag=*/false, 1e-12);
  const int k = static_cast<int>(dist.rows());
  CommutativeContext diag = CommutativeContext::maximal(Matrix::Identity(k, k));
  return LipGauge::finite_metric(std::move(diag), dist);
}

}  // namespace ncwass
