#include <doctest.h>

#include <cmath>

#include "ncwass/algebra.hpp"
#include "ncwass/errors.hpp"
#include "ncwass/fixtures.hpp"
#include "ncwass/sampling.hpp"

using namespace ncwass;

namespace {
Matrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix h(2, 2);
  h << s, s, s, -s;
  return h;
}
}  // namespace

TEST_CASE("make_context: identity, trivial, Hadamard") {
  CommutativeContext z(Matrix::Identity(2, 2), {{0}, {1}});
  CHECK(z.block_count() == 2);
  CHECK(z.is_maximal());
  CHECK(z.projection(0)(0, 0).real() == doctest::Approx(1.0));
  CHECK(z.projection(0)(1, 1).real() == doctest::Approx(0.0));

  CommutativeContext trivial(Matrix::Identity(2, 2), {{0, 1}});
  CHECK(trivial.block_count() == 1);
  CHECK((trivial.projection(0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-14);

  CommutativeContext x(hadamard(), {{0}, {1}});
  // P_1 = |+><+|: idempotent with all entries 1/2
  const Matrix& p = x.projection(0);
  CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p(0, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("make_context: rejects bad frames and partitions") {
  Matrix not_unitary(2, 2);
  not_unitary << 1, 1, 0, 1;
  CHECK_THROWS_WITH_AS(CommutativeContext(not_unitary, {{0}, {1}}),
                       doctest::Contains("unitarity"), ValidationError);
  CHECK_THROWS_AS(CommutativeContext(Matrix::Identity(2, 2), {{0}, {0, 1}}),
                  ValidationError);
  CHECK_THROWS_AS(CommutativeContext(Matrix::Identity(2, 2), {{0}}),
                  ValidationError);
}

TEST_CASE("restrict_state: Dirac, Hadamard, maximally mixed") {
  DensityState up = fixtures::qubit_up();
  CommutativeContext z = fixtures::qubit_sigma_z_context();
  CommutativeContext x = fixtures::qubit_sigma_x_context();

  ProbVector pz = restrict_state(up, z);
  CHECK(pz[0] == doctest::Approx(1.0));
  CHECK(pz[1] == doctest::Approx(0.0));

  ProbVector px = restrict_state(up, x);
  CHECK(px[0] == doctest::Approx(0.5));
  CHECK(px[1] == doctest::Approx(0.5));

  DensityState mixed(Matrix::Identity(2, 2) / 2.0);
  ProbVector pm = restrict_state(mixed, z);
  CHECK(pm[0] == doctest::Approx(0.5));
}

TEST_CASE("is_refinement: trivial, equal, incompatible") {
  CommutativeContext trivial(Matrix::Identity(2, 2), {{0, 1}});
  CommutativeContext z = fixtures::qubit_sigma_z_context();
  CommutativeContext x = fixtures::qubit_sigma_x_context();

  auto merge = is_refinement(trivial, z);
  REQUIRE(merge.has_value());
  CHECK((*merge)[0] == 0);
  CHECK((*merge)[1] == 0);

  auto self = is_refinement(z, z);
  REQUIRE(self.has_value());
  CHECK((*self)[0] == 0);
  CHECK((*self)[1] == 1);

  CHECK_FALSE(is_refinement(z, x).has_value());
}

TEST_CASE("coarsen: additivity, identity, total mass") {
  Vector p(3);
  p << 0.2, 0.3, 0.5;
  ProbVector q = coarsen(ProbVector(p), {0, 0, 1});
  CHECK(q[0] == doctest::Approx(0.5));
  CHECK(q[1] == doctest::Approx(0.5));

  ProbVector same = coarsen(ProbVector(p), {0, 1, 2});
  CHECK((same.p() - p).cwiseAbs().maxCoeff() < 1e-15);

  Vector d(3);
  d << 1.0, 0.0, 0.0;
  ProbVector total = coarsen(ProbVector(d), {0, 0, 0});
  CHECK(total.arity() == 1);
  CHECK(total[0] == doctest::Approx(1.0));
}

TEST_CASE("check_quasi_state: embeds pass, incompatible diagram passes vacuously") {
  ContextDiagram diagram = fixtures::qubit_diagram();
  QuasiState q = embed_state(fixtures::qubit_up(), diagram);
  QuasiStateReport report = check_quasi_state(q);
  CHECK(report.pass);
  CHECK(report.max_residual <= 1e-12);

  // sigma_z / sigma_x carry no mutual inclusion: no constraints to violate
  QuasiState gleason = fixtures::gleason_quasi_state();
  CHECK(check_quasi_state(gleason).pass);
  CHECK(check_quasi_state(gleason).residuals.empty());
}

TEST_CASE("embed_state: expected restrictions") {
  ContextDiagram diagram = fixtures::qubit_diagram();
  QuasiState q = embed_state(fixtures::qubit_up(), diagram);
  CHECK(q.value(0)[0] == doctest::Approx(1.0));  // sigma_z context
  CHECK(q.value(1)[0] == doctest::Approx(0.5));  // sigma_x context
  CHECK(q.value(2)[0] == doctest::Approx(1.0));  // trivial context

  QuasiState mixed = embed_state(DensityState(Matrix::Identity(2, 2) / 2.0), diagram);
  CHECK(mixed.value(0)[0] == doctest::Approx(0.5));
  CHECK(mixed.value(1)[0] == doctest::Approx(0.5));
}

TEST_CASE("linear_extension: recovery, Gleason witness, Bloch solve") {
  // embedding a state is always extendable back to one
  ContextDiagram diagram = fixtures::qubit_diagram();
  Rng rng(3);
  DensityState rho = random_density(2, rng);
  ExtensionResult ext = linear_extension(embed_state(rho, diagram));
  REQUIRE(ext.feasible);
  for (size_t c = 0; c < diagram.contexts().size(); ++c) {
    ProbVector expected = restrict_state(rho, diagram.contexts()[c]);
    ProbVector got = restrict_state(*ext.state, diagram.contexts()[c]);
    CHECK((expected.p() - got.p()).cwiseAbs().maxCoeff() < 1e-9);
  }

  // the Gleason fixture needs r_z = r_x = 1: |r| = sqrt(2) > 1
  ExtensionResult gleason = linear_extension(fixtures::gleason_quasi_state());
  CHECK_FALSE(gleason.feasible);
  REQUIRE(gleason.bloch.has_value());
  CHECK(gleason.bloch->norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // (1,0) on sigma_z and (0.5,0.5) on sigma_x pins rho = diag(1,0)
  std::vector<CommutativeContext> contexts{fixtures::qubit_sigma_z_context(),
                                           fixtures::qubit_sigma_x_context()};
  ContextDiagram two(std::move(contexts), {});
  Vector vz(2), vx(2);
  vz << 1.0, 0.0;
  vx << 0.5, 0.5;
  ExtensionResult pinned =
      linear_extension(QuasiState(two, {ProbVector(vz), ProbVector(vx)}));
  REQUIRE(pinned.feasible);
  CHECK((pinned.state->rho() - fixtures::qubit_up().rho()).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("linear_extension: least-squares route for n = 3") {
  Rng rng(11);
  CommutativeContext a = random_maximal_context(3, rng);
  CommutativeContext b = random_maximal_context(3, rng);
  ContextDiagram diagram({a, b}, {});
  DensityState rho = random_density(3, rng);
  ExtensionResult ext = linear_extension(embed_state(rho, diagram));
  REQUIRE(ext.feasible);
  CHECK(ext.residual <= 1e-8);
  for (int c = 0; c < 2; ++c) {
    ProbVector expected = restrict_state(rho, diagram.contexts()[c]);
    ProbVector got = restrict_state(*ext.state, diagram.contexts()[c]);
    CHECK((expected.p() - got.p()).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("property: restriction functoriality over random refinements") {
  Rng rng(23);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 100; ++trial) {
      Matrix u = haar_unitary(n, rng);
      CommutativeContext beta = CommutativeContext::maximal(u);
      // random coarsening: assign each singleton to one of n_blocks groups
      int n_blocks = 1 + static_cast<int>(rng.next_u64() % n);
      std::vector<std::vector<int>> blocks(n_blocks);
      for (int i = 0; i < n; ++i) {
        blocks[i < n_blocks ? i : static_cast<int>(rng.next_u64() % n_blocks)]
            .push_back(i);
      }
      CommutativeContext alpha(u, blocks);
      auto merge = is_refinement(alpha, beta);
      REQUIRE(merge.has_value());

      DensityState rho = random_density(n, rng);
      ProbVector lhs = coarsen(restrict_state(rho, beta), *merge);
      ProbVector rhs = restrict_state(rho, alpha);
      CHECK((lhs.p() - rhs.p()).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("property: restrictions of random states are valid distributions") {
  Rng rng(29);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 50; ++trial) {
      DensityState rho = random_density(n, rng);
      CommutativeContext ctx = random_maximal_context(n, rng);
      ProbVector p = restrict_state(rho, ctx);  // constructor validates
      CHECK(p.p().sum() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(p.p().minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("diagram: transitive closure and maximal indices") {
  ContextDiagram m4 = fixtures::m4_chain_diagram(0);
  // edges asserted (0,1), (1,2); closure adds (0,2)
  CHECK(m4.inclusions().size() == 3);
  auto maximal = m4.maximal_indices();
  REQUIRE(maximal.size() == 1);
  CHECK(maximal[0] == 2);

  CHECK_THROWS_AS(
      ContextDiagram({fixtures::qubit_sigma_z_context(),
                      fixtures::qubit_sigma_x_context()},
                     {{0, 1}}),
      ValidationError);
}
