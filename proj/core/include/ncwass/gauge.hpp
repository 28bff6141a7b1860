#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncwass/algebra.hpp"
#include "ncwass/common.hpp"
#include "ncwass/rng.hpp"

namespace ncwass {

// Lipschitz gauge on the self-adjoint part of M_n. Two families:
//   MultiCommutator  L(f) = max_k || [D_k, f] ||   (finite everywhere)
//   FiniteMetric     Lipschitz constant w.r.t. a metric on the spectrum of a
//                    declared base context; +infinity off that subalgebra.
class LipGauge {
 public:
  enum class Variant { MultiCommutator, FiniteMetric };

  static LipGauge multi_commutator(std::vector<HermitianElement> diracs);
  static LipGauge finite_metric(CommutativeContext base, RealMatrix dist);

  Variant variant() const { return variant_; }
  int dim() const { return n_; }
  const std::vector<HermitianElement>& diracs() const { return diracs_; }
  const CommutativeContext& base_context() const { return *base_; }
  const RealMatrix& dist() const { return dist_; }

 private:
  LipGauge() = default;
  Variant variant_ = Variant::MultiCommutator;
  int n_ = 0;
  std::vector<HermitianElement> diracs_;
  std::optional<CommutativeContext> base_;
  RealMatrix dist_;
};

// Extended-real gauge value; +infinity when f lies outside the domain of a
// partially-defined gauge.
double eval_gauge(const LipGauge& gauge, const HermitianElement& f);
double eval_gauge(const LipGauge& gauge, const Matrix& f);

struct AxiomViolation {
  std::string axiom;     // "homogeneity" | "subadditivity" | "unit"
  std::string witness;   // short description of the offending sample
  double magnitude;
};

struct GaugeReport {
  std::vector<HermitianElement> null_space_basis;
  bool is_only_constants = false;
  std::vector<AxiomViolation> sampled_violations;
  int samples = 0;
};

GaugeReport check_axioms(const LipGauge& gauge, int sample_count, uint64_t seed);

// Checker over an arbitrary candidate gauge; used to validate the checker
// itself against deliberate non-gauges.
GaugeReport check_axioms_fn(const std::function<double(const Matrix&)>& fn,
                            const std::function<Matrix(Rng&)>& sample,
                            int sample_count, uint64_t seed);

// Basis of N = {f self-adjoint : [D_k, f] = 0 for all k}. MultiCommutator
// gauges only; for FiniteMetric the null space is the constants by
// construction.
GaugeReport null_space(const LipGauge& gauge);

// Gauge on the spectral coefficients of a context: v -> L(sum_i v_i P_i).
class RestrictedGauge {
 public:
  enum class Kind {
    Spectral,       // max_k || sum_i v_i [D_k, P_i] ||
    Polyhedral,     // max over pairs |v_i - v_j| / d_eff(i, j)
    ConstantsOnly,  // +infinity off the constants (context not contained
                    // in the finite domain)
  };
  struct Pair {
    int i, j;
    double d;
  };

  Kind kind() const { return kind_; }
  int block_count() const { return k_; }
  double eval(const Vector& v) const;
  const std::vector<std::vector<Matrix>>& maps() const { return maps_; }
  const std::vector<Pair>& pairs() const { return pairs_; }

 private:
  friend RestrictedGauge restrict_gauge(const LipGauge&, const CommutativeContext&);
  Kind kind_ = Kind::ConstantsOnly;
  int k_ = 0;
  std::vector<std::vector<Matrix>> maps_;  // maps[dirac][block]
  std::vector<Pair> pairs_;
};

RestrictedGauge restrict_gauge(const LipGauge& gauge, const CommutativeContext& alpha);

struct LatticeReport {
  struct Violation {
    Vector v, w;
    double excess;
  };
  int samples = 0;
  std::vector<Violation> violations;
  double max_excess = 0.0;
  bool pass = true;
};

// Samples the Wasserstein-compatibility inequality
// L(sup(f,g)) <= max(L(f), L(g)) on the context's coefficient vectors.
LatticeReport check_lattice_inequality(const LipGauge& gauge,
                                       const CommutativeContext& alpha,
                                       int sample_count, uint64_t seed);

struct SolidityReport {
  struct PerContext {
    bool finite;               // restricted gauge finite on all of R^k
    bool separates;            // restricted null space = constants
    int restricted_null_dim;
  };
  std::vector<PerContext> contexts;
  bool solid = false;
};

// Contexts must be maximal (k = n). Finite-valued gauges are solid; the
// per-context separation verdicts are recorded regardless.
SolidityReport solidity_probe(const LipGauge& gauge,
                              const std::vector<CommutativeContext>& contexts);

// Lipschitz gauge induced by a metric on a k-point spectrum, realized on the
// diagonal context of M_k.
LipGauge induced_point_gauge(const RealMatrix& dist);

}  // namespace ncwass
