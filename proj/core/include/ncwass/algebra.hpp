#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncwass/common.hpp"
#include "ncwass/errors.hpp"

namespace ncwass {

// Self-adjoint element f of M_n.
class HermitianElement {
 public:
  explicit HermitianElement(Matrix entries, double herm_tol = tol::herm);
  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  Matrix entries_;
};

// State mu on M_n as a positive unit-trace density matrix;
// mu(f) = tr(rho f).
class DensityState {
 public:
  explicit DensityState(Matrix rho);
  int dim() const { return static_cast<int>(rho_.rows()); }
  const Matrix& rho() const { return rho_; }
  double expectation(const Matrix& f) const { return (rho_ * f).trace().real(); }

 private:
  Matrix rho_;
};

// Probability vector on a finite spectrum.
class ProbVector {
 public:
  explicit ProbVector(Vector p);
  int arity() const { return static_cast<int>(p_.size()); }
  const Vector& p() const { return p_; }
  double operator[](int i) const { return p_(i); }

 private:
  Vector p_;
};

// Unital commutative C*-subalgebra of M_n: an orthonormal frame (unitary U)
// plus an ordered partition of {0..n-1} into blocks. Block i carries the
// spectral projection P_i = U E_i U^*; the block index set is the Gelfand
// spectrum of the subalgebra.
class CommutativeContext {
 public:
  CommutativeContext(Matrix frame, std::vector<std::vector<int>> partition);

  // Frame with singleton blocks (maximal abelian subalgebra).
  static CommutativeContext maximal(Matrix frame);

  int dim() const { return static_cast<int>(frame_.rows()); }
  int block_count() const { return static_cast<int>(partition_.size()); }
  bool is_maximal() const { return block_count() == dim(); }
  const Matrix& frame() const { return frame_; }
  const std::vector<std::vector<int>>& partition() const { return partition_; }
  const Matrix& projection(int i) const { return projections_[i]; }
  const std::vector<Matrix>& projections() const { return projections_; }

  // Element of the subalgebra with spectral coefficients v: sum_i v_i P_i.
  Matrix element(const Vector& v) const;

 private:
  Matrix frame_;
  std::vector<std::vector<int>> partition_;
  std::vector<Matrix> projections_;
};

CommutativeContext make_context(const Matrix& frame,
                                const std::vector<std::vector<int>>& partition);

// p_i = tr(rho P_i).
ProbVector restrict_state(const DensityState& mu, const CommutativeContext& alpha);

// Maps each beta-block to the alpha-block whose projection contains it.
using MergeMap = std::vector<int>;

// True (with the block-merge map) iff A_alpha is a subalgebra of A_beta,
// i.e. every projection of alpha is a sum of projections of beta.
std::optional<MergeMap> is_refinement(const CommutativeContext& alpha,
                                      const CommutativeContext& beta,
                                      double tolerance = tol::refinement);

// Pushforward along the merge map: q_j = sum over {i : merge[i] = j} of p_i.
ProbVector coarsen(const ProbVector& p, const MergeMap& merge);

// Finite truncation of the diagram of commutative subalgebras ordered by
// inclusion. Asserted inclusions are verified; the relation is closed under
// transitivity at construction.
class ContextDiagram {
 public:
  struct Inclusion {
    int coarse;  // index of A_alpha
    int fine;    // index of A_beta with A_alpha subset of A_beta
    MergeMap merge;
  };

  ContextDiagram(std::vector<CommutativeContext> contexts,
                 const std::vector<std::pair<int, int>>& inclusions);

  int dim() const;
  const std::vector<CommutativeContext>& contexts() const { return contexts_; }
  const std::vector<Inclusion>& inclusions() const { return inclusions_; }
  std::vector<int> maximal_indices() const;

 private:
  std::vector<CommutativeContext> contexts_;
  std::vector<Inclusion> inclusions_;
};

// Family {p_alpha} of distributions over the diagram's contexts.
class QuasiState {
 public:
  QuasiState(ContextDiagram diagram, std::vector<ProbVector> values);
  const ContextDiagram& diagram() const { return diagram_; }
  const std::vector<ProbVector>& values() const { return values_; }
  const ProbVector& value(int context_index) const { return values_[context_index]; }

 private:
  ContextDiagram diagram_;
  std::vector<ProbVector> values_;
};

struct QuasiStateReport {
  struct Entry {
    int coarse;
    int fine;
    double residual;  // inf-norm of values[coarse] - coarsen(values[fine])
  };
  std::vector<Entry> residuals;
  double max_residual = 0.0;
  bool pass = true;
};

QuasiStateReport check_quasi_state(const QuasiState& q,
                                   double tolerance = tol::coarsening);

QuasiState embed_state(const DensityState& mu, const ContextDiagram& diagram);

// Outcome of testing whether a quasi-state extends to a genuine state.
struct ExtensionResult {
  bool feasible = false;
  std::optional<DensityState> state;
  double residual = 0.0;        // linear-system residual of the best fit
  double min_eigenvalue = 0.0;  // of the fitted Hermitian
  std::optional<Vector> bloch;  // n = 2 exact path: the Bloch vector r
  std::string certificate;      // violated quantity when infeasible
};

// Solves tr(rho P_i) = p_i over Hermitian rho with tr(rho) = 1.
// For n = 2 the Bloch parametrization rho = (I + r.sigma)/2 is solved
// exactly; for n >= 3 a least-squares fit with eigenvalue floor is used
// (heuristic: exactness claimed only for n = 2).
ExtensionResult linear_extension(const QuasiState& q);

}  // namespace ncwass
