#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ncwass/errors.hpp"
#include "ncwass/solver.hpp"

namespace ncwass {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kFeasibilityTol = 1e-9;

// Internal variable: x_user = shift + sign * u  (u >= 0), or for a split
// free variable two internal columns with signs +1 / -1.
struct ColumnMap {
  int user_var;
  double shift;
  double sign;
};

struct Standard {
  // rows over internal nonnegative variables, all equalities after adding
  // slack/surplus columns
  std::vector<Vector> coeffs;  // structural part only
  std::vector<Relation> rel;
  std::vector<double> rhs;
  std::vector<double> row_sign;   // -1 when the row was negated to get rhs >= 0
  std::vector<int> user_row;      // index into lp.rows, -1 for bound rows
  std::vector<ColumnMap> columns;
  Vector objective;  // over internal structural variables
};

Standard standardize(const LinearProgram& lp) {
  const int n = lp.nvars();
  Standard st;

  // internal columns
  std::vector<std::vector<int>> cols_of(n);
  for (int j = 0; j < n; ++j) {
    double lo = lp.lower(j), hi = lp.upper(j);
    if (lo > hi) {
      // signalled by an impossible bound row below
      st.columns.push_back({j, 0.0, 1.0});
      cols_of[j] = {static_cast<int>(st.columns.size()) - 1};
      continue;
    }
    if (std::isfinite(lo)) {
      st.columns.push_back({j, lo, 1.0});
      cols_of[j] = {static_cast<int>(st.columns.size()) - 1};
    } else if (std::isfinite(hi)) {
      st.columns.push_back({j, hi, -1.0});
      cols_of[j] = {static_cast<int>(st.columns.size()) - 1};
    } else {
      st.columns.push_back({j, 0.0, 1.0});
      st.columns.push_back({j, 0.0, -1.0});
      cols_of[j] = {static_cast<int>(st.columns.size()) - 2,
                    static_cast<int>(st.columns.size()) - 1};
    }
  }
  const int ncols = static_cast<int>(st.columns.size());

  st.objective = Vector::Zero(ncols);
  for (int c = 0; c < ncols; ++c) {
    st.objective(c) = lp.objective(st.columns[c].user_var) * st.columns[c].sign;
  }

  auto add_row = [&](const Vector& user_coeffs, Relation rel, double rhs,
                     int user_row) {
    Vector row = Vector::Zero(ncols);
    double adj = rhs;
    for (int c = 0; c < ncols; ++c) {
      const auto& cm = st.columns[c];
      row(c) = user_coeffs(cm.user_var) * cm.sign;
      // shift contributes once per user variable; only the first internal
      // column of a variable carries it
      if (c == cols_of[cm.user_var][0]) adj -= user_coeffs(cm.user_var) * cm.shift;
    }
    double sign = 1.0;
    if (adj < 0) {
      row = -row;
      adj = -adj;
      sign = -1.0;
      rel = rel == Relation::LessEq
                ? Relation::GreaterEq
                : (rel == Relation::GreaterEq ? Relation::LessEq : Relation::Equal);
    }
    st.coeffs.push_back(row);
    st.rel.push_back(rel);
    st.rhs.push_back(adj);
    st.row_sign.push_back(sign);
    st.user_row.push_back(user_row);
  };

  for (size_t r = 0; r < lp.rows.size(); ++r) {
    if (static_cast<int>(lp.rows[r].coeffs.size()) != n) {
      throw ValidationError("DimensionMismatch", "LP row has wrong arity");
    }
    if (!lp.rows[r].coeffs.allFinite() || !std::isfinite(lp.rows[r].rhs)) {
      throw ValidationError("BadCoefficient", "LP row has non-finite entries");
    }
    add_row(lp.rows[r].coeffs, lp.rows[r].rel, lp.rows[r].rhs,
            static_cast<int>(r));
  }

  // finite two-sided bounds become explicit rows on the shifted variable
  for (int j = 0; j < n; ++j) {
    double lo = lp.lower(j), hi = lp.upper(j);
    if (lo > hi) {
      Vector e = Vector::Zero(n);
      e(j) = 1.0;
      // u_j <= negative cap: infeasible by construction
      st.coeffs.push_back(Vector::Unit(ncols, cols_of[j][0]));
      st.rel.push_back(Relation::LessEq);
      st.rhs.push_back(hi - lo);  // negative
      // normalize sign like add_row would
      if (st.rhs.back() < 0) {
        st.coeffs.back() = -st.coeffs.back();
        st.rhs.back() = -st.rhs.back();
        st.rel.back() = Relation::GreaterEq;
        st.row_sign.push_back(-1.0);
      } else {
        st.row_sign.push_back(1.0);
      }
      st.user_row.push_back(-1);
      continue;
    }
    if (std::isfinite(lo) && std::isfinite(hi)) {
      st.coeffs.push_back(Vector::Unit(ncols, cols_of[j][0]));
      st.rel.push_back(Relation::LessEq);
      st.rhs.push_back(hi - lo);
      st.row_sign.push_back(1.0);
      st.user_row.push_back(-1);
    }
  }
  return st;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  if (!lp.objective.allFinite()) {
    throw ValidationError("BadCoefficient", "LP objective has non-finite entries");
  }
  Standard st = standardize(lp);

  const int m = static_cast<int>(st.coeffs.size());
  const int ns = static_cast<int>(st.columns.size());

  // column layout: [structural | slack/surplus | artificial], rhs kept apart
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  int ntot = ns;
  for (int i = 0; i < m; ++i) {
    if (st.rel[i] != Relation::Equal) slack_col[i] = ntot++;
  }
  for (int i = 0; i < m; ++i) {
    if (st.rel[i] != Relation::LessEq) art_col[i] = ntot++;
  }

  RealMatrix tab = RealMatrix::Zero(m, ntot);
  Vector rhs(m);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    tab.row(i).head(ns) = st.coeffs[i].transpose();
    rhs(i) = st.rhs[i];
    if (slack_col[i] >= 0) {
      tab(i, slack_col[i]) = st.rel[i] == Relation::LessEq ? 1.0 : -1.0;
    }
    if (art_col[i] >= 0) {
      tab(i, art_col[i]) = 1.0;
      basis[i] = art_col[i];
    } else {
      basis[i] = slack_col[i];
    }
  }
  std::vector<char> active(m, 1);
  std::vector<char> is_artificial(ntot, 0);
  for (int i = 0; i < m; ++i) {
    if (art_col[i] >= 0) is_artificial[art_col[i]] = 1;
  }

  const long pivot_cap = std::max<long>(
      1000, 10L * (lp.nvars() + static_cast<long>(lp.rows.size())) *
                (lp.nvars() + static_cast<long>(lp.rows.size())));
  int pivots = 0;
  int degenerate_streak = 0;
  bool bland = false;

  Vector cost = Vector::Zero(ntot);  // phase-dependent

  auto reduced_costs = [&](Vector& r) {
    r = cost;
    for (int i = 0; i < m; ++i) {
      if (!active[i]) continue;
      double cb = cost(basis[i]);
      if (cb != 0.0) r -= cb * tab.row(i).transpose();
    }
  };

  auto pivot = [&](int row, int col) {
    double piv = tab(row, col);
    tab.row(row) /= piv;
    rhs(row) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == row || !active[i]) continue;
      double f = tab(i, col);
      if (f != 0.0) {
        tab.row(i) -= f * tab.row(row);
        rhs(i) -= f * rhs(row);
        tab(i, col) = 0.0;
      }
    }
    basis[row] = col;
    ++pivots;
  };

  // runs the simplex until optimal; returns false on unbounded
  auto iterate = [&](bool phase1) -> bool {
    Vector r(ntot);
    while (true) {
      if (pivots > pivot_cap) {
        throw NumericalError("NumericalFailure", "simplex pivot limit exceeded");
      }
      reduced_costs(r);
      int enter = -1;
      if (!bland) {
        double best = kReducedCostTol;
        for (int j = 0; j < ntot; ++j) {
          if (!phase1 && is_artificial[j]) continue;
          if (r(j) > best) {
            best = r(j);
            enter = j;
          }
        }
      } else {
        for (int j = 0; j < ntot; ++j) {
          if (!phase1 && is_artificial[j]) continue;
          if (r(j) > kReducedCostTol) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) return true;  // optimal

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m; ++i) {
        if (!active[i]) continue;
        double a = tab(i, enter);
        if (a > kPivotTol) {
          double ratio = rhs(i) / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && leave >= 0 &&
               basis[i] < basis[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;  // unbounded direction

      if (best_ratio < 1e-12) {
        if (++degenerate_streak > 50) bland = true;
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      pivot(leave, enter);
    }
  };

  LpSolution sol;

  // phase 1: maximize -sum(artificials)
  bool need_phase1 = false;
  for (int i = 0; i < m; ++i) need_phase1 = need_phase1 || art_col[i] >= 0;
  if (need_phase1) {
    cost.setZero();
    for (int j = 0; j < ntot; ++j) {
      if (is_artificial[j]) cost(j) = -1.0;
    }
    if (!iterate(true)) {
      throw NumericalError("NumericalFailure",
                           "phase-1 objective unbounded (numerical breakdown)");
    }
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (active[i] && is_artificial[basis[i]]) infeas += rhs(i);
    }
    if (infeas > kFeasibilityTol) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // drive remaining zero-level artificials out; drop dependent rows
    for (int i = 0; i < m; ++i) {
      if (!active[i] || !is_artificial[basis[i]]) continue;
      int enter = -1;
      for (int j = 0; j < ntot && enter < 0; ++j) {
        if (!is_artificial[j] && std::abs(tab(i, j)) > kPivotTol) enter = j;
      }
      if (enter >= 0) {
        pivot(i, enter);
      } else {
        active[i] = 0;  // redundant row
      }
    }
  }

  // phase 2
  cost.setZero();
  cost.head(ns) = st.objective;
  if (!iterate(false)) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  // recover the user-space solution
  Vector u = Vector::Zero(ntot);
  for (int i = 0; i < m; ++i) {
    if (active[i]) u(basis[i]) = rhs(i);
  }
  Vector x = Vector::Zero(lp.nvars());
  std::vector<char> shifted(lp.nvars(), 0);
  for (int c = 0; c < ns; ++c) {
    const auto& cm = st.columns[c];
    x(cm.user_var) += cm.sign * u(c);
    if (!shifted[cm.user_var]) {
      x(cm.user_var) += cm.shift;
      shifted[cm.user_var] = 1;
    }
  }
  sol.primal = x;
  sol.value = lp.objective.dot(x);
  sol.pivots = pivots;

  // duals from the reduced costs of the initial identity columns
  Vector r(ntot);
  reduced_costs(r);
  sol.dual = Vector::Zero(lp.rows.size());
  for (int i = 0; i < m; ++i) {
    if (st.user_row[i] < 0) continue;
    double y;
    if (art_col[i] >= 0) {
      y = -r(art_col[i]);
    } else {
      y = st.rel[i] == Relation::LessEq ? -r(slack_col[i]) : r(slack_col[i]);
    }
    if (!active[i]) y = 0.0;
    sol.dual(st.user_row[i]) = st.row_sign[i] * y;
  }
  return sol;
}

}  // namespace ncwass
