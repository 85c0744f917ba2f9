#include "ontokit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ontokit {

LinearProgram::LinearProgram(int n_vars)
    : objective(Eigen::VectorXd::Zero(n_vars)),
      a_ub(0, n_vars),
      b_ub(0),
      a_eq(0, n_vars),
      b_eq(0) {}

namespace {

void append_row(Eigen::MatrixXd& a, Eigen::VectorXd& b, const Eigen::VectorXd& row, double rhs) {
  if (row.size() != a.cols()) throw std::invalid_argument("LP row has wrong length");
  a.conservativeResize(a.rows() + 1, Eigen::NoChange);
  a.row(a.rows() - 1) = row.transpose();
  b.conservativeResize(b.size() + 1);
  b(b.size() - 1) = rhs;
}

class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Eigen::MatrixXd::Zero(rows, cols + 1)), basis_(rows, -1) {}

  Eigen::MatrixXd& t() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(t_.rows()); }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double rhs(int i) const { return t_(i, t_.cols() - 1); }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[r] = c;
  }

  void drop_row(int r) {
    const int n = rows() - 1;
    if (r < n) t_.block(r, 0, n - r, t_.cols()) = t_.block(r + 1, 0, n - r, t_.cols()).eval();
    t_.conservativeResize(n, Eigen::NoChange);
    basis_.erase(basis_.begin() + r);
  }

  // Maximizes cost over the columns flagged as allowed. Returns false when
  // the problem is unbounded in that direction.
  bool optimize(const Eigen::VectorXd& cost, const std::vector<bool>& allowed, const SimplexOptions& opts,
                int& iterations) {
    for (;;) {
      if (++iterations > opts.max_iterations) throw std::runtime_error("simplex iteration limit reached");
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {
        if (!allowed[j]) continue;
        double rc = cost(j);
        for (int i = 0; i < rows(); ++i) rc -= cost(basis_[i]) * t_(i, j);
        if (rc > opts.feasibility_tol) {
          enter = j;  // Bland: first improving column
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        if (t_(i, enter) <= opts.pivot_tol) continue;
        const double ratio = rhs(i) / t_(i, enter);
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && leave >= 0 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

void LinearProgram::add_le(const Eigen::VectorXd& row, double rhs) { append_row(a_ub, b_ub, row, rhs); }
void LinearProgram::add_eq(const Eigen::VectorXd& row, double rhs) { append_row(a_eq, b_eq, row, rhs); }

void LinearProgram::validate() const {
  const auto n = objective.size();
  if (a_ub.cols() != n || a_eq.cols() != n) throw std::invalid_argument("LP: constraint width != n_vars");
  if (a_ub.rows() != b_ub.size() || a_eq.rows() != b_eq.size()) {
    throw std::invalid_argument("LP: rhs length mismatch");
  }
}

std::string to_string(LpResult::Status s) {
  switch (s) {
    case LpResult::Status::Optimal:
      return "optimal";
    case LpResult::Status::Infeasible:
      return "infeasible";
    case LpResult::Status::Unbounded:
      return "unbounded";
  }
  return "?";
}

LpResult simplex_solve(const LinearProgram& lp, const SimplexOptions& opts) {
  lp.validate();
  const int n = lp.n_vars();
  const int m_ub = static_cast<int>(lp.b_ub.size());
  const int m_eq = static_cast<int>(lp.b_eq.size());
  const int m = m_ub + m_eq;

  // Standardized rows: [A | slack] x = b with b >= 0 after sign flips.
  Eigen::MatrixXd a(m, n + m_ub);
  a.setZero();
  Eigen::VectorXd b(m);
  std::vector<double> sign(m, 1.0);
  for (int i = 0; i < m_ub; ++i) {
    a.block(i, 0, 1, n) = lp.a_ub.row(i);
    a(i, n + i) = 1.0;
    b(i) = lp.b_ub(i);
  }
  for (int i = 0; i < m_eq; ++i) {
    a.block(m_ub + i, 0, 1, n) = lp.a_eq.row(i);
    b(m_ub + i) = lp.b_eq(i);
  }
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      sign[i] = -1.0;
      a.row(i) *= -1.0;
      b(i) *= -1.0;
    }
  }

  // Slack columns serve as the starting basis where their sign survived;
  // every other row gets an artificial.
  std::vector<int> art_row;
  for (int i = 0; i < m; ++i) {
    if (!(i < m_ub && sign[i] > 0.0)) art_row.push_back(i);
  }
  const int n_std = n + m_ub;
  const int n_art = static_cast<int>(art_row.size());
  Tableau tab(m, n_std + n_art);
  tab.t().block(0, 0, m, n_std) = a;
  tab.t().col(n_std + n_art) = b;
  for (int i = 0; i < m_ub; ++i) {
    if (sign[i] > 0.0) tab.basis()[i] = n + i;
  }
  for (int k = 0; k < n_art; ++k) {
    tab.t()(art_row[k], n_std + k) = 1.0;
    tab.basis()[art_row[k]] = n_std + k;
  }

  LpResult res;
  res.x = Eigen::VectorXd::Zero(n);

  // Phase 1: maximize -sum(artificials).
  Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(n_std + n_art);
  cost1.tail(n_art).setConstant(-1.0);
  std::vector<bool> all_cols(n_std + n_art, true);
  tab.optimize(cost1, all_cols, opts, res.iterations);
  double infeasibility = 0.0;
  for (int i = 0; i < tab.rows(); ++i) {
    if (tab.basis()[i] >= n_std) infeasibility += tab.rhs(i);
  }
  if (infeasibility > opts.feasibility_tol) {
    // Duals of the phase-1 optimum: B^T y = c_B in the standardized space.
    Eigen::MatrixXd basis_cols(m, m);
    Eigen::VectorXd c_b(m);
    for (int i = 0; i < m; ++i) {
      const int col = tab.basis()[i];
      if (col < n_std) {
        basis_cols.col(i) = a.col(col);
      } else {
        basis_cols.col(i).setZero();
        basis_cols(art_row[col - n_std], i) = 1.0;
      }
      c_b(i) = cost1(col);
    }
    const Eigen::VectorXd y = basis_cols.transpose().fullPivLu().solve(c_b);
    // y^T A >= 0 on structural and slack columns and y^T b = -infeasibility;
    // undo the sign flips to express it on the caller's rows.
    res.status = LpResult::Status::Infeasible;
    res.certificate.y_ub = Eigen::VectorXd(m_ub);
    res.certificate.y_eq = Eigen::VectorXd(m_eq);
    for (int i = 0; i < m_ub; ++i) res.certificate.y_ub(i) = std::max(0.0, sign[i] * y(i));
    for (int i = 0; i < m_eq; ++i) res.certificate.y_eq(i) = sign[m_ub + i] * y(m_ub + i);
    return res;
  }

  // Drive zero-level artificials out of the basis; rows where that is
  // impossible are linearly redundant and get dropped.
  for (int i = tab.rows() - 1; i >= 0; --i) {
    if (tab.basis()[i] < n_std) continue;
    int col = -1;
    for (int j = 0; j < n_std; ++j) {
      if (std::abs(tab.t()(i, j)) > opts.pivot_tol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      tab.drop_row(i);
    }
  }

  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(n_std + n_art);
  cost2.head(n) = lp.objective;
  std::vector<bool> structural(n_std + n_art, false);
  std::fill(structural.begin(), structural.begin() + n_std, true);
  if (!tab.optimize(cost2, structural, opts, res.iterations)) {
    res.status = LpResult::Status::Unbounded;
    return res;
  }
  for (int i = 0; i < tab.rows(); ++i) {
    const int col = tab.basis()[i];
    if (col < n) res.x(col) = std::max(0.0, tab.rhs(i));
  }
  res.status = LpResult::Status::Optimal;
  res.value = lp.objective.dot(res.x);
  return res;
}

double max_violation(const LinearProgram& lp, const Eigen::VectorXd& x) {
  double worst = 0.0;
  if (x.size() > 0) worst = std::max(worst, -x.minCoeff());
  if (lp.b_ub.size() > 0) worst = std::max(worst, (lp.a_ub * x - lp.b_ub).maxCoeff());
  if (lp.b_eq.size() > 0) worst = std::max(worst, (lp.a_eq * x - lp.b_eq).cwiseAbs().maxCoeff());
  return worst;
}

FarkasCheck verify_farkas(const LinearProgram& lp, const FarkasCertificate& cert, double tol) {
  FarkasCheck chk;
  if (cert.y_ub.size() != lp.b_ub.size() || cert.y_eq.size() != lp.b_eq.size()) return chk;
  Eigen::VectorXd cols = Eigen::VectorXd::Zero(lp.n_vars());
  if (lp.b_ub.size() > 0) cols += lp.a_ub.transpose() * cert.y_ub;
  if (lp.b_eq.size() > 0) cols += lp.a_eq.transpose() * cert.y_eq;
  chk.min_column = cols.size() > 0 ? cols.minCoeff() : 0.0;
  chk.rhs = lp.b_ub.dot(cert.y_ub) + lp.b_eq.dot(cert.y_eq);
  chk.min_y_ub = cert.y_ub.size() > 0 ? cert.y_ub.minCoeff() : 0.0;
  chk.ok = chk.min_column >= -tol && chk.min_y_ub >= -tol && chk.rhs <= -tol;
  return chk;
}

}  // namespace ontokit
