#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncwass/algebra.hpp"
#include "ncwass/gauge.hpp"
#include "ncwass/metric.hpp"

namespace ncwass {

struct SearchConfig {
  int n_haar = -1;  // default 256 for n <= 3, 64 for n >= 4
  int n_refine = 3;
  double step0 = 0.3;
  uint64_t seed = 0;
  std::vector<CommutativeContext> extra_contexts;
};

struct SearchStats {
  int samples = 0;
  int refine_steps = 0;
  uint64_t seed = 0;
};

// Certified lower bound of the projective supremum with the witnessing
// context. pseudo is set when the gauge fails the solidity probe on a
// sampled context (the value is then only a pseudo-distance bound);
// budget_exceeded when some inner cutting plane stopped on its cut budget.
struct ProjectiveResult {
  double value = 0.0;
  double witness_error_bound = 0.0;  // propagated point-metric gaps
  std::optional<CommutativeContext> witness_context;
  std::map<std::string, double> per_context_values;
  SearchStats stats;
  bool pseudo = false;
  bool budget_exceeded = false;
};

double context_wasserstein(const LipGauge& gauge, const CommutativeContext& alpha,
                           const ProbVector& mu_a, const ProbVector& nu_a,
                           double p);
double context_wasserstein(const LipGauge& gauge, const CommutativeContext& alpha,
                           const DensityState& mu, const DensityState& nu,
                           double p);

// W_{p,alpha} together with a first-order propagation of the point-metric
// solver gaps through the optimal coupling:
//   error_bound = sum_ij gap_ij * value^{1-p} * d_ij^{p-1} * pi_ij.
struct CertifiedWasserstein {
  double value = 0.0;
  double error_bound = 0.0;
  bool certified = true;
};
CertifiedWasserstein context_wasserstein_certified(const LipGauge& gauge,
                                                   const CommutativeContext& alpha,
                                                   const ProbVector& mu_a,
                                                   const ProbVector& nu_a,
                                                   double p);

// Supremum over (a) user-supplied contexts, (b) Haar-random maximal
// contexts, (c) local refinement of the best frame by U <- U exp(i t H)
// over a coordinate basis of Hermitians with step halving. For a
// finite-metric gauge the base context is the unique relevant maximal
// context and the value is exact.
ProjectiveResult projective_wasserstein(const LipGauge& gauge,
                                        const DensityState& mu,
                                        const DensityState& nu, double p,
                                        const SearchConfig& cfg = {});

// Quasi-state input: supremum over the diagram's maximal contexts only.
ProjectiveResult projective_wasserstein(const LipGauge& gauge, const QuasiState& mu,
                                        const QuasiState& nu, double p);

struct MarginReport {
  struct Item {
    std::string label;
    double margin;
  };
  std::vector<Item> items;
  double min_margin = kInf;
  bool pass = true;
};

// W_{p,beta} >= W_{p,alpha} on every inclusion edge of the diagram.
MarginReport verify_inclusion_monotonicity(
    const LipGauge& gauge, const ContextDiagram& diagram,
    const std::vector<std::pair<DensityState, DensityState>>& pairs, double p,
    double tolerance);

// W_{p,alpha} <= W_{q,alpha} for p <= q.
MarginReport verify_p_monotonicity(
    const LipGauge& gauge, const std::vector<CommutativeContext>& contexts,
    const std::vector<std::pair<DensityState, DensityState>>& pairs,
    const std::vector<double>& ps, double tolerance);

struct DiameterBoundReport {
  std::vector<double> per_context_diam;
  double diam_max = 0.0;
  struct Item {
    std::string label;
    double lhs;  // (sup_alpha W_p)^p
    double rhs;  // Diam^{p-1} * sup_alpha W_1
    double margin;
  };
  std::vector<Item> items;
  double min_margin = kInf;
  bool pass = true;
};

// Sampled-diameter consistency and the power bound
// W_p^p <= Diam^{p-1} W_1, both on a common context set.
DiameterBoundReport verify_diameter_and_bound(
    const LipGauge& gauge, const std::vector<CommutativeContext>& contexts,
    const std::vector<std::pair<DensityState, DensityState>>& pairs, double p,
    double tolerance = 1e-6);

struct KrReport {
  struct Item {
    double w1;
    double dl;
    double diff;  // w1 - dl
  };
  std::vector<Item> items;
  bool lattice_hypothesis = false;  // sampled evidence on this context
  bool equality_asserted = false;
  double max_abs_diff = 0.0;
  double min_diff = kInf;  // w1 - dl must stay >= -1e-7
  bool pass = true;
};

// W_{1,alpha} vs d_{L,alpha}: the >= direction always holds (the point
// metric is defined from the gauge); equality is asserted when the
// restriction is a Lipschitz-constant gauge or the lattice inequality was
// verified on samples.
KrReport verify_kr_identity(const LipGauge& gauge, const CommutativeContext& alpha,
                            const std::vector<std::pair<ProbVector, ProbVector>>& pairs,
                            double tolerance, int lattice_samples = 200,
                            uint64_t seed = 0);

}  // namespace ncwass
