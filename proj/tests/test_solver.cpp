#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ncwass/errors.hpp"
#include "ncwass/rng.hpp"
#include "ncwass/solver.hpp"

using namespace ncwass;

namespace {

// Brute-force oracle: enumerate basic solutions of {Ax <= b, 0 <= x} by
// intersecting every n-subset of the active hyperplanes. Independent of the
// simplex path.
double vertex_enumeration_max(const Vector& c, const std::vector<Vector>& rows,
                              const std::vector<double>& rhs) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(rows.size());
  // hyperplanes: m constraint rows + n nonnegativity walls
  std::vector<int> idx(m + n);
  for (int i = 0; i < m + n; ++i) idx[i] = i;

  double best = -kInf;
  std::vector<int> comb(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      RealMatrix a(n, n);
      Vector b(n);
      for (int r = 0; r < n; ++r) {
        if (comb[r] < m) {
          a.row(r) = rows[comb[r]].transpose();
          b(r) = rhs[comb[r]];
        } else {
          a.row(r).setZero();
          a(r, comb[r] - m) = 1.0;
          b(r) = 0.0;
        }
      }
      Eigen::FullPivLU<RealMatrix> lu(a);
      if (!lu.isInvertible()) return;
      Vector x = lu.solve(b);
      for (int j = 0; j < n; ++j) {
        if (x(j) < -1e-9) return;
      }
      for (int r = 0; r < m; ++r) {
        if (rows[r].dot(x) > rhs[r] + 1e-9) return;
      }
      best = std::max(best, c.dot(x));
      return;
    }
    for (int i = start; i <= m + n - (n - depth); ++i) {
      comb[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("lp: one-variable box") {
  LinearProgram lp = LinearProgram::make(1);
  lp.objective << 1.0;
  lp.add_row(Vector::Ones(1), Relation::LessEq, 3.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.primal(0) == doctest::Approx(3.0));
}

TEST_CASE("lp: two-point transport instance") {
  // min cost coupling of delta_1 -> delta_2 with cost [[0,1],[1,0]]:
  // maximize the negated cost
  LinearProgram lp = LinearProgram::make(4);  // pi11 pi12 pi21 pi22
  lp.objective << 0, -1, -1, 0;
  Vector r1(4), r2(4), c1(4), c2(4);
  r1 << 1, 1, 0, 0;
  r2 << 0, 0, 1, 1;
  c1 << 1, 0, 1, 0;
  c2 << 0, 1, 0, 1;
  lp.add_row(r1, Relation::Equal, 1.0);
  lp.add_row(r2, Relation::Equal, 0.0);
  lp.add_row(c1, Relation::Equal, 0.0);
  lp.add_row(c2, Relation::Equal, 1.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(sol.primal(1) == doctest::Approx(1.0));  // pi_12 = 1
}

TEST_CASE("lp: degenerate program with redundant equality rows") {
  // x + y = 1 asserted twice plus x, y >= 0; maximize 2x + y
  LinearProgram lp = LinearProgram::make(2);
  lp.objective << 2.0, 1.0;
  Vector row(2);
  row << 1.0, 1.0;
  lp.add_row(row, Relation::Equal, 1.0);
  lp.add_row(row, Relation::Equal, 1.0);
  Vector cap(2);
  cap << 1.0, 0.0;
  lp.add_row(cap, Relation::LessEq, 1.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("lp: unbounded and infeasible detection") {
  {
    LinearProgram lp = LinearProgram::make(1);
    lp.objective << 1.0;
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
  }
  {
    LinearProgram lp = LinearProgram::make(1);
    lp.objective << 1.0;
    lp.add_row(Vector::Ones(1), Relation::LessEq, -1.0);
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);
  }
}

TEST_CASE("lp: free variables and two-sided bounds") {
  // maximize x - y with x in [-2, 5] free-ish, y free, y >= x - 3
  LinearProgram lp = LinearProgram::make(2);
  lp.objective << 1.0, -1.0;
  lp.lower << -2.0, -kInf;
  lp.upper << 5.0, kInf;
  Vector row(2);
  row << 1.0, -1.0;  // x - y <= 3
  lp.add_row(row, Relation::LessEq, 3.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("lp: Beale cycling instance solves with anti-cycling fallback") {
  // classic example that cycles under naive most-negative pivoting
  LinearProgram lp = LinearProgram::make(4);
  lp.objective << 0.75, -150.0, 0.02, -6.0;
  Vector r1(4), r2(4), r3(4);
  r1 << 0.25, -60.0, -1.0 / 25.0, 9.0;
  r2 << 0.5, -90.0, -1.0 / 50.0, 3.0;
  r3 << 0.0, 0.0, 1.0, 0.0;
  lp.add_row(r1, Relation::LessEq, 0.0);
  lp.add_row(r2, Relation::LessEq, 0.0);
  lp.add_row(r3, Relation::LessEq, 1.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("lp: random canonical programs agree with vertex enumeration") {
  Rng rng(17);
  for (int inst = 0; inst < 50; ++inst) {
    int n = 2 + static_cast<int>(rng.next_u64() % 3);  // 2..4 vars
    int m = 2 + static_cast<int>(rng.next_u64() % 4);  // 2..5 rows
    LinearProgram lp = LinearProgram::make(n);
    std::vector<Vector> rows;
    std::vector<double> rhs;
    for (int j = 0; j < n; ++j) lp.objective(j) = rng.normal();
    for (int i = 0; i < m; ++i) {
      Vector row(n);
      for (int j = 0; j < n; ++j) row(j) = std::abs(rng.normal());
      double b = 1.0 + std::abs(rng.normal());
      lp.add_row(row, Relation::LessEq, b);
      rows.push_back(row);
      rhs.push_back(b);
    }
    // cap every variable so the region is bounded
    for (int j = 0; j < n; ++j) {
      Vector row = Vector::Zero(n);
      row(j) = 1.0;
      lp.add_row(row, Relation::LessEq, 10.0);
      rows.push_back(row);
      rhs.push_back(10.0);
    }
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    double oracle = vertex_enumeration_max(lp.objective, rows, rhs);
    CHECK(sol.value == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("lp: strong duality and dual feasibility on random programs") {
  Rng rng(99);
  for (int inst = 0; inst < 200; ++inst) {
    int n = 2 + static_cast<int>(rng.next_u64() % 11);  // <= 12 vars
    int m = 2 + static_cast<int>(rng.next_u64() % 8);
    LinearProgram lp = LinearProgram::make(n);
    for (int j = 0; j < n; ++j) lp.objective(j) = rng.normal();
    RealMatrix a(m, n);
    Vector b(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = std::abs(rng.normal());
      b(i) = 1.0 + std::abs(rng.normal());
      lp.add_row(a.row(i).transpose(), Relation::LessEq, b(i));
    }
    for (int j = 0; j < n; ++j) {
      Vector row = Vector::Zero(n);
      row(j) = 1.0;
      lp.add_row(row, Relation::LessEq, 5.0);
    }
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);

    // duality gap against y.b over all rows (bound rows included)
    double dual_value = 0.0;
    for (size_t r = 0; r < lp.rows.size(); ++r) {
      dual_value += sol.dual(static_cast<int>(r)) * lp.rows[r].rhs;
    }
    CHECK(std::abs(sol.value - dual_value) <= 1e-8 * (1.0 + std::abs(sol.value)));

    // dual feasibility for the canonical <= form: y >= 0, A^T y >= c
    Vector aty = Vector::Zero(n);
    for (size_t r = 0; r < lp.rows.size(); ++r) {
      CHECK(sol.dual(static_cast<int>(r)) >= -1e-9);
      aty += sol.dual(static_cast<int>(r)) * lp.rows[r].coeffs;
    }
    for (int j = 0; j < n; ++j) {
      CHECK(aty(j) >= lp.objective(j) - 1e-9);
    }
  }
}

TEST_CASE("lp: duals with mixed relations match the analytic multipliers") {
  // max 2x + 3y s.t. x + y = 4, x - y >= -2, x <= 3, x,y >= 0
  // optimum (1, 3), value 11; duals 2.5 (equality) and -0.5 (>= row)
  LinearProgram lp = LinearProgram::make(2);
  lp.objective << 2.0, 3.0;
  Vector eq(2), ge(2), cap(2);
  eq << 1.0, 1.0;
  ge << 1.0, -1.0;
  cap << 1.0, 0.0;
  lp.add_row(eq, Relation::Equal, 4.0);
  lp.add_row(ge, Relation::GreaterEq, -2.0);
  lp.add_row(cap, Relation::LessEq, 3.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(11.0).epsilon(1e-10));
  CHECK(sol.primal(0) == doctest::Approx(1.0));
  CHECK(sol.primal(1) == doctest::Approx(3.0));
  CHECK(sol.dual(0) == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(sol.dual(1) == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(sol.dual(2) == doctest::Approx(0.0).epsilon(1e-9));
  double dual_value = sol.dual(0) * 4.0 + sol.dual(1) * -2.0 + sol.dual(2) * 3.0;
  CHECK(dual_value == doctest::Approx(sol.value).epsilon(1e-9));
}

TEST_CASE("lp: contradictory bounds are infeasible") {
  LinearProgram lp = LinearProgram::make(2);
  lp.objective << 1.0, 1.0;
  lp.lower << 2.0, 0.0;
  lp.upper << 1.0, 1.0;  // lower > upper on x
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);
}

TEST_CASE("cutting plane: qubit spectral instance hits the closed form") {
  // coordinates (a, b, c, d) of f = a I + b sx + c sy + d sz in the
  // orthonormal Hermitian basis of M_2 would mix; use the raw Pauli span
  // via explicit constraint maps instead. Variables: (a, b, c, d).
  // [sz, f] = 2i(b sy - c sx), [sx, f] = 2i(c sz - d sy).
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  Matrix zero = Matrix::Zero(2, 2);

  BallMaximization prob;
  prob.objective = Vector::Zero(4);
  prob.objective(3) = 2.0;  // tr((rho-sigma) f) = 2d for rho-sigma = sz
  prob.constraint_maps.push_back(
      {zero, Matrix(Complex(0, 2) * sy), Matrix(Complex(0, -2) * sx), zero});
  prob.constraint_maps.push_back(
      {zero, zero, Matrix(Complex(0, 2) * sz), Matrix(Complex(0, -2) * sy)});
  Vector identity_dir = Vector::Zero(4);
  identity_dir(0) = 1.0;
  prob.quotient_directions.push_back(identity_dir);

  BallOptions opts;
  opts.record_cuts = true;
  BallResult res = maximize_over_gauge_ball(prob, opts);
  REQUIRE(res.status == BallStatus::Certified);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.maximizer(3) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(res.value <= res.upper_bound + 1e-12);
  CHECK(res.certified_gap <= opts.tol * (1.0 + res.value));

  // LP upper bound is non-increasing in the cut count
  for (size_t i = 1; i < res.cut_history.size(); ++i) {
    CHECK(res.cut_history[i].upper_bound <=
          res.cut_history[i - 1].upper_bound + 1e-9);
  }
}

TEST_CASE("cutting plane: zero objective and 1x1 closed form") {
  {
    BallMaximization prob;
    prob.objective = Vector::Zero(3);
    prob.constraint_maps.push_back(
        {Matrix::Identity(1, 1), Matrix::Identity(1, 1), Matrix::Identity(1, 1)});
    BallResult res = maximize_over_gauge_ball(prob);
    CHECK(res.status == BallStatus::Certified);
    CHECK(res.value == 0.0);
  }
  {
    // sup { v1 - v2 : |v1 - v2| * c <= 1 } = 1/c with c = ||[D, P]||
    const double c = 1.7;
    Matrix m1(1, 1), m2(1, 1);
    m1(0, 0) = c;
    m2(0, 0) = -c;
    BallMaximization prob;
    prob.objective = Vector(2);
    prob.objective << 1.0, -1.0;
    prob.constraint_maps.push_back({m1, m2});
    prob.quotient_directions.push_back(Vector::Ones(2));
    BallResult res = maximize_over_gauge_ball(prob);
    REQUIRE(res.status == BallStatus::Certified);
    CHECK(res.value == doctest::Approx(1.0 / c).epsilon(1e-7));
  }
}

TEST_CASE("cutting plane: vanishing constraints on the objective direction") {
  // all maps zero on a direction the objective pairs with: supremum +inf
  BallMaximization prob;
  prob.objective = Vector(2);
  prob.objective << 1.0, -1.0;
  Matrix z = Matrix::Zero(1, 1);
  prob.constraint_maps.push_back({z, z});
  BallResult res = maximize_over_gauge_ball(prob);
  CHECK(res.status == BallStatus::Unbounded);
  CHECK(is_infinite(res.value));
  REQUIRE(res.unbounded_direction.has_value());
}

TEST_CASE("cutting plane: diagonal-map family has a closed form") {
  // M(v) = diag(a_j v_j): the ball is the box |v_j| <= 1/|a_j| and the
  // supremum is sum_j |c_j| / |a_j|
  Rng rng(41);
  for (int inst = 0; inst < 20; ++inst) {
    int m = 3 + static_cast<int>(rng.next_u64() % 4);
    Vector a(m), c(m);
    for (int j = 0; j < m; ++j) {
      a(j) = 0.5 + 1.5 * rng.uniform();
      c(j) = rng.normal();
    }
    std::vector<Matrix> maps;
    for (int j = 0; j < m; ++j) {
      Matrix e = Matrix::Zero(m, m);
      e(j, j) = a(j);
      maps.push_back(e);
    }
    BallMaximization prob;
    prob.objective = c;
    prob.constraint_maps.push_back(maps);
    BallResult res = maximize_over_gauge_ball(prob);
    REQUIRE(res.status == BallStatus::Certified);
    double closed_form = (c.cwiseAbs().array() / a.array()).sum();
    CHECK(res.value == doctest::Approx(closed_form).epsilon(1e-6));
    CHECK(res.value <= res.upper_bound + 1e-12);
  }
}

TEST_CASE("cutting plane: polyhedral instances agree with a direct LP") {
  // 1x1 constraint maps make the gauge ball an explicit polytope
  // { |row_k . v| <= 1 }, solvable exactly by the general simplex
  Rng rng(47);
  for (int inst = 0; inst < 50; ++inst) {
    int m = 2 + static_cast<int>(rng.next_u64() % 5);
    int n_rows = m + 1 + static_cast<int>(rng.next_u64() % 4);
    Vector c(m);
    for (int j = 0; j < m; ++j) c(j) = rng.normal();
    RealMatrix rows(n_rows, m);
    for (int k = 0; k < n_rows; ++k) {
      for (int j = 0; j < m; ++j) rows(k, j) = rng.normal();
    }

    BallMaximization prob;
    prob.objective = c;
    for (int k = 0; k < n_rows; ++k) {
      std::vector<Matrix> maps;
      for (int j = 0; j < m; ++j) {
        Matrix e(1, 1);
        e(0, 0) = rows(k, j);
        maps.push_back(e);
      }
      prob.constraint_maps.push_back(std::move(maps));
    }
    BallResult ball = maximize_over_gauge_ball(prob);

    LinearProgram lp = LinearProgram::make(m);
    lp.objective = c;
    lp.lower = Vector::Constant(m, -kInf);
    lp.upper = Vector::Constant(m, kInf);
    for (int k = 0; k < n_rows; ++k) {
      lp.add_row(rows.row(k).transpose(), Relation::LessEq, 1.0);
      lp.add_row(-rows.row(k).transpose(), Relation::LessEq, 1.0);
    }
    LpSolution direct = solve_lp(lp);

    if (direct.status == LpStatus::Optimal) {
      REQUIRE(ball.status == BallStatus::Certified);
      CHECK(ball.value ==
            doctest::Approx(direct.value).epsilon(1e-6).scale(1.0));
    } else {
      REQUIRE(direct.status == LpStatus::Unbounded);
      CHECK(ball.status == BallStatus::Unbounded);
    }
  }
}

TEST_CASE("cutting plane: dense sampling oracle on a random qubit objective") {
  // random traceless objective under the two-Pauli gauge; compare with the
  // max over many sampled directions of the gauge sphere
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  Matrix zero = Matrix::Zero(2, 2);

  Rng rng(5);
  for (int inst = 0; inst < 3; ++inst) {
    Vector c = Vector::Zero(4);
    c(1) = rng.normal();
    c(2) = rng.normal();
    c(3) = rng.normal();

    BallMaximization prob;
    prob.objective = c;
    prob.constraint_maps.push_back(
        {zero, Matrix(Complex(0, 2) * sy), Matrix(Complex(0, -2) * sx), zero});
    prob.constraint_maps.push_back(
        {zero, zero, Matrix(Complex(0, 2) * sz), Matrix(Complex(0, -2) * sy)});
    Vector e0 = Vector::Zero(4);
    e0(0) = 1.0;
    prob.quotient_directions.push_back(e0);
    BallResult res = maximize_over_gauge_ball(prob);
    REQUIRE(res.status == BallStatus::Certified);

    auto gauge_of = [&](const Vector& v) {
      double n1 = 2.0 * std::hypot(v(1), v(2));
      double n2 = 2.0 * std::hypot(v(2), v(3));
      return std::max(n1, n2);
    };
    double sampled = 0.0;
    for (int s = 0; s < 100000; ++s) {
      Vector v = Vector::Zero(4);
      for (int j = 1; j < 4; ++j) v(j) = rng.normal();
      double g = gauge_of(v);
      if (g < 1e-12) continue;
      sampled = std::max(sampled, c.dot(v) / g);
    }
    CHECK(std::abs(res.value - sampled) <= 1e-4 * (1.0 + res.value));
  }
}
