#include "flatproc/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace flatproc {

namespace {

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), t_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return t_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  // Objective row holds z_j - c_j; its RHS holds the current objective value.
  double& obj(int c) { return at(rows_, c); }

  void pivot(int r, int c) {
    const double p = at(r, c);
    for (int j = 0; j <= cols_; ++j) at(r, j) /= p;
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
    }
    basis[r] = c;
    ++pivots;
  }

  // Returns false when unbounded.
  bool optimize(int allowed_cols, double eps) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (obj(j) < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= eps) continue;
        const double ratio = rhs(i) / a;
        if (leave < 0 || ratio < best - eps) {
          leave = i;
          best = ratio;
        } else if (ratio <= best + eps && basis[i] < basis[leave]) {
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  int rows_;
  int cols_;
  std::vector<double> t_;
  std::vector<int> basis;
  std::size_t pivots = 0;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double eps) {
  const int m = static_cast<int>(lp.a.rows());
  const int nv = static_cast<int>(lp.a.cols());
  if (lp.b.size() != m || lp.c.size() != nv) throw Error("linear program dimensions disagree");

  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i)
    if (lp.b(i) < 0) art_rows.push_back(i);
  const int n_art = static_cast<int>(art_rows.size());
  const int slack0 = nv;
  const int art0 = nv + m;
  Tableau t(m, nv + m + n_art);
  t.basis.assign(static_cast<std::size_t>(m), 0);

  int art = 0;
  for (int i = 0; i < m; ++i) {
    const double sign = lp.b(i) < 0 ? -1.0 : 1.0;
    for (int j = 0; j < nv; ++j) t.at(i, j) = sign * lp.a(i, j);
    t.at(i, slack0 + i) = sign;
    t.rhs(i) = sign * lp.b(i);
    if (sign < 0) {
      t.at(i, art0 + art) = 1.0;
      t.basis[i] = art0 + art;
      ++art;
    } else {
      t.basis[i] = slack0 + i;
    }
  }

  LpResult result;
  if (n_art > 0) {
    // Phase 1: maximize -(sum of artificials).
    for (int j = art0; j < art0 + n_art; ++j) t.obj(j) = 1.0;
    for (int i : art_rows)
      for (int j = 0; j <= t.cols_; ++j) t.obj(j) -= t.at(i, j);
    t.optimize(t.cols_, eps);
    if (t.obj(t.cols_) < -1e-9) {
      result.status = LpResult::Status::Infeasible;
      result.pivots = t.pivots;
      return result;
    }
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < art0) continue;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(t.at(i, j)) > eps) {
          t.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 objective row: z_j - c_j with z from the current basis.
  for (int j = 0; j <= t.cols_; ++j) t.obj(j) = 0.0;
  for (int j = 0; j < nv; ++j) t.obj(j) = -lp.c(j);
  for (int i = 0; i < m; ++i) {
    const int bvar = t.basis[i];
    const double cb = bvar < nv ? lp.c(bvar) : 0.0;
    if (cb == 0.0) continue;
    for (int j = 0; j <= t.cols_; ++j) t.obj(j) += cb * t.at(i, j);
  }
  if (!t.optimize(art0, eps)) {
    result.status = LpResult::Status::Unbounded;
    result.pivots = t.pivots;
    return result;
  }
  result.x = Vector::Zero(nv);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < nv) result.x(t.basis[i]) = t.rhs(i);
  result.value = lp.c.dot(result.x);
  result.pivots = t.pivots;
  return result;
}

}  // namespace flatproc
