#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ontokit {

/// maximize c^T x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;

  explicit LinearProgram(int n_vars = 0);
  int n_vars() const { return static_cast<int>(objective.size()); }
  /// Appends a row; coefficient vectors must have n_vars entries.
  void add_le(const Eigen::VectorXd& row, double rhs);
  void add_ge(const Eigen::VectorXd& row, double rhs) { add_le(-row, -rhs); }
  void add_eq(const Eigen::VectorXd& row, double rhs);
  /// Throws std::invalid_argument on inconsistent shapes.
  void validate() const;
};

/// Farkas multipliers: y_ub >= 0, y_ub^T A_ub + y_eq^T A_eq >= 0 componentwise
/// and y_ub^T b_ub + y_eq^T b_eq < 0. Any such pair proves infeasibility.
struct FarkasCertificate {
  Eigen::VectorXd y_ub;
  Eigen::VectorXd y_eq;
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
  FarkasCertificate certificate;
  int iterations = 0;

  bool optimal() const { return status == Status::Optimal; }
};

std::string to_string(LpResult::Status s);

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-11;
  int max_iterations = 200000;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
LpResult simplex_solve(const LinearProgram& lp, const SimplexOptions& opts = {});

/// Largest constraint violation of x (including x >= 0).
double max_violation(const LinearProgram& lp, const Eigen::VectorXd& x);

struct FarkasCheck {
  bool ok = false;
  double min_column = 0.0;  // min_j (A^T y)_j, should be >= -tol
  double rhs = 0.0;         // b^T y, should be < 0
  double min_y_ub = 0.0;    // should be >= -tol
};

/// Verifies a certificate by direct arithmetic: columns >= -tol,
/// y_ub >= -tol and b^T y <= -tol.
FarkasCheck verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert, double tol = 1e-9);

}  // namespace ontokit
