#include "ncwass/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace ncwass {

namespace {

void check_dim(int n, const char* what) {
  if (n < 1 || n > kMaxDim) {
    std::ostringstream os;
    os << what << ": dimension " << n << " outside supported range [1, "
       << kMaxDim << "]";
    throw ValidationError("DimensionMismatch", os.str());
  }
}

}  // namespace

HermitianElement::HermitianElement(Matrix entries, double herm_tol)
    : entries_(std::move(entries)) {
  check_dim(static_cast<int>(entries_.rows()), "HermitianElement");
  if (entries_.rows() != entries_.cols()) {
    throw ValidationError("DimensionMismatch", "HermitianElement must be square");
  }
  if (!is_hermitian(entries_, herm_tol)) {
    throw ValidationError("NotHermitian",
                          "matrix differs from its conjugate transpose");
  }
  // symmetrize so downstream arithmetic sees an exactly Hermitian matrix
  entries_ = 0.5 * (entries_ + entries_.adjoint().eval());
}

DensityState::DensityState(Matrix rho) : rho_(std::move(rho)) {
  check_dim(static_cast<int>(rho_.rows()), "DensityState");
  if (rho_.rows() != rho_.cols()) {
    throw ValidationError("DimensionMismatch", "density matrix must be square");
  }
  if (!is_hermitian(rho_, tol::herm)) {
    throw ValidationError("NotHermitian", "density matrix is not Hermitian");
  }
  rho_ = 0.5 * (rho_ + rho_.adjoint().eval());
  double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > tol::trace_one) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " differs from 1";
    throw ValidationError("NotUnitTrace", os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < tol::psd_floor) {
    std::ostringstream os;
    os << "density matrix minimum eigenvalue " << min_eig << " below "
       << tol::psd_floor;
    throw ValidationError("NotPositive", os.str());
  }
}

ProbVector::ProbVector(Vector p) : p_(std::move(p)) {
  if (p_.size() < 1) {
    throw ValidationError("ArityMismatch", "probability vector must be nonempty");
  }
  double sum = p_.sum();
  if (std::abs(sum - 1.0) > tol::prob_sum) {
    std::ostringstream os;
    os << "probability vector sums to " << sum;
    throw ValidationError("NotNormalized", os.str());
  }
  for (int i = 0; i < p_.size(); ++i) {
    if (p_(i) < tol::prob_floor) {
      std::ostringstream os;
      os << "probability entry " << i << " = " << p_(i) << " is negative";
      throw ValidationError("NotPositive", os.str());
    }
    if (p_(i) < 0.0) p_(i) = 0.0;  // clamp tiny negatives on output
  }
}

CommutativeContext::CommutativeContext(Matrix frame,
                                       std::vector<std::vector<int>> partition)
    : frame_(std::move(frame)), partition_(std::move(partition)) {
  const int n = static_cast<int>(frame_.rows());
  check_dim(n, "CommutativeContext");
  if (frame_.rows() != frame_.cols()) {
    throw ValidationError("NonUnitaryFrame", "frame must be square");
  }
  double unitary_residual =
      (frame_ * frame_.adjoint() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (unitary_residual > tol::unitary) {
    std::ostringstream os;
    os << "frame fails unitarity, residual " << unitary_residual;
    throw ValidationError("NonUnitaryFrame", os.str());
  }

  std::vector<int> seen(n, 0);
  for (const auto& block : partition_) {
    if (block.empty()) {
      throw ValidationError("BadPartition", "empty block in partition");
    }
    for (int idx : block) {
      if (idx < 0 || idx >= n) {
        throw ValidationError("BadPartition", "partition index out of range");
      }
      if (seen[idx]++) {
        throw ValidationError("BadPartition", "partition blocks overlap");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw ValidationError("BadPartition", "partition does not cover {1..n}");
    }
  }

  projections_.reserve(partition_.size());
  for (const auto& block : partition_) {
    Matrix e = Matrix::Zero(n, n);
    for (int idx : block) e(idx, idx) = 1.0;
    projections_.push_back(frame_ * e * frame_.adjoint());
  }

  // mutual orthogonality / idempotence / completeness of derived projections
  Matrix sum = Matrix::Zero(n, n);
  for (size_t i = 0; i < projections_.size(); ++i) {
    const Matrix& p = projections_[i];
    if ((p * p - p).cwiseAbs().maxCoeff() > tol::projection) {
      throw ValidationError("BadPartition", "derived projection not idempotent");
    }
    for (size_t j = i + 1; j < projections_.size(); ++j) {
      if ((p * projections_[j]).cwiseAbs().maxCoeff() > tol::projection) {
        throw ValidationError("BadPartition", "derived projections overlap");
      }
    }
    sum += p;
  }
  if ((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol::projection) {
    throw ValidationError("BadPartition", "projections do not sum to identity");
  }
}

CommutativeContext CommutativeContext::maximal(Matrix frame) {
  const int n = static_cast<int>(frame.rows());
  std::vector<std::vector<int>> partition(n);
  for (int i = 0; i < n; ++i) partition[i] = {i};
  return CommutativeContext(std::move(frame), std::move(partition));
}

Matrix CommutativeContext::element(const Vector& v) const {
  if (v.size() != block_count()) {
    throw ValidationError("ArityMismatch",
                          "coefficient vector does not match block count");
  }
  Matrix f = Matrix::Zero(dim(), dim());
  for (int i = 0; i < block_count(); ++i) f += v(i) * projections_[i];
  return f;
}

CommutativeContext make_context(const Matrix& frame,
                                const std::vector<std::vector<int>>& partition) {
  return CommutativeContext(frame, partition);
}

ProbVector restrict_state(const DensityState& mu, const CommutativeContext& alpha) {
  if (mu.dim() != alpha.dim()) {
    throw ValidationError("DimensionMismatch",
                          "state and context dimensions differ");
  }
  Vector p(alpha.block_count());
  for (int i = 0; i < alpha.block_count(); ++i) {
    p(i) = (mu.rho() * alpha.projection(i)).trace().real();
  }
  return ProbVector(p);
}

std::optional<MergeMap> is_refinement(const CommutativeContext& alpha,
                                      const CommutativeContext& beta,
                                      double tolerance) {
  if (alpha.dim() != beta.dim()) {
    throw ValidationError("DimensionMismatch",
                          "contexts live in different dimensions");
  }
  const int ka = alpha.block_count();
  const int kb = beta.block_count();

  // Greedy assignment by trace overlap; robust to frame phase/permutation.
  MergeMap merge(kb, -1);
  for (int j = 0; j < kb; ++j) {
    const Matrix& q = beta.projection(j);
    double rank = q.trace().real();
    for (int i = 0; i < ka; ++i) {
      double overlap = (alpha.projection(i) * q).trace().real();
      if (overlap > (1.0 - 1e-6) * rank) {
        merge[j] = i;
        break;
      }
    }
    if (merge[j] < 0) return std::nullopt;
  }

  // Exact check: every alpha projection equals the sum of its beta parts.
  for (int i = 0; i < ka; ++i) {
    Matrix sum = Matrix::Zero(alpha.dim(), alpha.dim());
    for (int j = 0; j < kb; ++j) {
      if (merge[j] == i) sum += beta.projection(j);
    }
    if (operator_norm(alpha.projection(i) - sum) > tolerance) return std::nullopt;
  }
  return merge;
}

ProbVector coarsen(const ProbVector& p, const MergeMap& merge) {
  if (static_cast<int>(merge.size()) != p.arity()) {
    throw ValidationError("BadMergeMap",
                          "merge map is not total on the fine blocks");
  }
  int target = 0;
  for (int t : merge) {
    if (t < 0) throw ValidationError("BadMergeMap", "merge map has unmapped block");
    target = std::max(target, t + 1);
  }
  Vector q = Vector::Zero(target);
  for (int i = 0; i < p.arity(); ++i) q(merge[i]) += p[i];
  return ProbVector(q);
}

ContextDiagram::ContextDiagram(std::vector<CommutativeContext> contexts,
                               const std::vector<std::pair<int, int>>& inclusions)
    : contexts_(std::move(contexts)) {
  const int m = static_cast<int>(contexts_.size());
  if (m == 0) {
    throw ValidationError("BadDiagram", "diagram needs at least one context");
  }
  for (const auto& c : contexts_) {
    if (c.dim() != contexts_[0].dim()) {
      throw ValidationError("MixedDimensions",
                            "diagram contexts live in different dimensions");
    }
  }

  std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
  for (auto [a, b] : inclusions) {
    if (a < 0 || a >= m || b < 0 || b >= m) {
      throw ValidationError("BadDiagram", "inclusion index out of range");
    }
    if (a == b) continue;
    if (!is_refinement(contexts_[a], contexts_[b])) {
      std::ostringstream os;
      os << "asserted inclusion " << a << " in " << b << " fails refinement check";
      throw ValidationError("BadDiagram", os.str());
    }
    adj[a][b] = 1;
  }
  // transitive closure
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      if (!adj[i][k]) continue;
      for (int j = 0; j < m; ++j) {
        if (adj[k][j]) adj[i][j] = 1;
      }
    }
  }
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (!adj[a][b]) continue;
      auto merge = is_refinement(contexts_[a], contexts_[b]);
      if (!merge) {
        std::ostringstream os;
        os << "transitive inclusion " << a << " in " << b
           << " fails refinement check";
        throw ValidationError("BadDiagram", os.str());
      }
      inclusions_.push_back({a, b, *merge});
    }
  }
}

int ContextDiagram::dim() const { return contexts_[0].dim(); }

std::vector<int> ContextDiagram::maximal_indices() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(contexts_.size()); ++i) {
    if (contexts_[i].is_maximal()) out.push_back(i);
  }
  return out;
}

QuasiState::QuasiState(ContextDiagram diagram, std::vector<ProbVector> values)
    : diagram_(std::move(diagram)), values_(std::move(values)) {
  if (values_.size() != diagram_.contexts().size()) {
    throw ValidationError("ArityMismatch",
                          "quasi-state needs one distribution per context");
  }
  for (size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].arity() != diagram_.contexts()[i].block_count()) {
      throw ValidationError("ArityMismatch",
                            "distribution arity does not match context");
    }
  }
}

QuasiStateReport check_quasi_state(const QuasiState& q, double tolerance) {
  QuasiStateReport report;
  for (const auto& inc : q.diagram().inclusions()) {
    ProbVector pushed = coarsen(q.value(inc.fine), inc.merge);
    double residual =
        (q.value(inc.coarse).p() - pushed.p()).cwiseAbs().maxCoeff();
    report.residuals.push_back({inc.coarse, inc.fine, residual});
    report.max_residual = std::max(report.max_residual, residual);
  }
  report.pass = report.max_residual <= tolerance;
  return report;
}

QuasiState embed_state(const DensityState& mu, const ContextDiagram& diagram) {
  if (mu.dim() != diagram.dim()) {
    throw ValidationError("DimensionMismatch",
                          "state and diagram dimensions differ");
  }
  std::vector<ProbVector> values;
  values.reserve(diagram.contexts().size());
  for (const auto& alpha : diagram.contexts()) {
    values.push_back(restrict_state(mu, alpha));
  }
  return QuasiState(diagram, std::move(values));
}

namespace {

ExtensionResult extend_bloch(const QuasiState& q) {
  // rho = (I + r.sigma)/2; each rank-1 projection P = (I + a.sigma)/2 turns
  // tr(rho P) = p into the linear equation r.a = 2p - 1.
  static const Matrix sigma_x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  static const Matrix sigma_y =
      (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  static const Matrix sigma_z = (Matrix(2, 2) << 1, 0, 0, -1).finished();

  std::vector<Vector> rows;
  std::vector<double> rhs;
  for (size_t c = 0; c < q.diagram().contexts().size(); ++c) {
    const auto& alpha = q.diagram().contexts()[c];
    if (alpha.block_count() != 2) continue;  // trivial context: no constraint
    for (int i = 0; i < 2; ++i) {
      const Matrix& p = alpha.projection(i);
      Vector a(3);
      a(0) = (p * sigma_x).trace().real();
      a(1) = (p * sigma_y).trace().real();
      a(2) = (p * sigma_z).trace().real();
      rows.push_back(a);
      rhs.push_back(2.0 * q.value(static_cast<int>(c))[i] - 1.0);
    }
  }

  ExtensionResult result;
  Vector r = Vector::Zero(3);
  if (!rows.empty()) {
    RealMatrix a(rows.size(), 3);
    Vector b(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      a.row(static_cast<int>(i)) = rows[i].transpose();
      b(static_cast<int>(i)) = rhs[i];
    }
    // minimum-norm solution: the Bloch vector of smallest length matching
    // all context restrictions
    r = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    result.residual = (a * r - b).cwiseAbs().maxCoeff();
  }
  result.bloch = r;

  const double norm = r.norm();
  result.min_eigenvalue = 0.5 * (1.0 - norm);
  if (result.residual > 1e-10) {
    std::ostringstream os;
    os << "inconsistent linear system, residual " << result.residual;
    result.certificate = os.str();
    return result;
  }
  if (norm > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "Bloch vector norm " << norm << " exceeds 1";
    result.certificate = os.str();
    return result;
  }
  Matrix rho = 0.5 * (Matrix::Identity(2, 2) + r(0) * sigma_x +
                      r(1) * sigma_y + r(2) * sigma_z);
  result.feasible = true;
  result.state = DensityState(rho);
  return result;
}

}  // namespace

ExtensionResult linear_extension(const QuasiState& q) {
  const int n = q.diagram().dim();
  if (n == 2) return extend_bloch(q);

  // Least-squares fit over Hermitian coordinates, then an eigenvalue-floor
  // projection. Heuristic for n >= 3; both steps are reported.
  const auto& basis = hermitian_basis(n);
  const int m = static_cast<int>(basis.size());

  std::vector<Vector> rows;
  std::vector<double> rhs;
  {
    Vector trace_row(m);
    Matrix id = Matrix::Identity(n, n);
    for (int a = 0; a < m; ++a) trace_row(a) = (id * basis[a]).trace().real();
    rows.push_back(trace_row);
    rhs.push_back(1.0);
  }
  for (size_t c = 0; c < q.diagram().contexts().size(); ++c) {
    const auto& alpha = q.diagram().contexts()[c];
    for (int i = 0; i < alpha.block_count(); ++i) {
      Vector row(m);
      for (int a = 0; a < m; ++a) {
        row(a) = (alpha.projection(i) * basis[a]).trace().real();
      }
      rows.push_back(row);
      rhs.push_back(q.value(static_cast<int>(c))[i]);
    }
  }

  RealMatrix a(rows.size(), m);
  Vector b(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    a.row(static_cast<int>(i)) = rows[i].transpose();
    b(static_cast<int>(i)) = rhs[i];
  }
  Vector v = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);

  ExtensionResult result;
  result.residual = (a * v - b).cwiseAbs().maxCoeff();
  Matrix rho = hermitian_from_coordinates(n, v);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  result.min_eigenvalue = es.eigenvalues().minCoeff();

  if (result.residual > 1e-8) {
    std::ostringstream os;
    os << "linear system residual " << result.residual << " exceeds 1e-8";
    result.certificate = os.str();
    return result;
  }
  if (result.min_eigenvalue < -1e-8) {
    std::ostringstream os;
    os << "minimum eigenvalue " << result.min_eigenvalue << " below -1e-8";
    result.certificate = os.str();
    return result;
  }

  // floor tiny negative eigenvalues and renormalize
  Vector eigs = es.eigenvalues().cwiseMax(0.0);
  eigs /= eigs.sum();
  Matrix projected = es.eigenvectors() * eigs.asDiagonal() *
                     es.eigenvectors().adjoint();
  result.feasible = true;
  result.state = DensityState(projected);
  return result;
}

}  // namespace ncwass
