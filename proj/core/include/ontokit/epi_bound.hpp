#pragma once

// Linear-programming bounds on the overlap fraction for finite families of
// preparations and measurements, over models whose ontic states are
// deterministic noncontextual outcome assignments (atoms).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ontokit/framework.hpp"
#include "ontokit/ks_valuation.hpp"
#include "ontokit/simplex.hpp"

namespace ontokit {

class FragmentError : public std::runtime_error {
 public:
  FragmentError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct Fragment {
  std::string name;
  int dim = 0;
  std::vector<PureState> states;
  std::vector<std::vector<PureState>> bases;
  /// Born coefficients snapped to nearby small-denominator rationals.
  bool exact = false;

  /// Distinct rays over all bases, in first-appearance order.
  std::vector<PureState> vectors;
  /// bases[b][k] is vectors[members[b][k]].
  std::vector<std::vector<int>> members;

  /// Validates and fills `vectors` / `members`.
  static Fragment build(std::string name, int dim, std::vector<PureState> states,
                        std::vector<std::vector<PureState>> bases, bool exact = false);

  /// Index of the vector equal to s as a ray, or -1.
  int vector_index(const PureState& s) const;
};

/// Text format:
///
///     dim=3
///     exact                       (optional)
///     state: 1,0 0,0 0,0
///     basis:
///       1,0 0,0 0,0
///       0,0 1,0 0,0
///       0,0 0,0 1,0
///
/// Amplitudes are `re,im` or a bare real; vectors are normalized on input.
/// `#` starts a comment.
Fragment parse_fragment(const std::string& text, const std::string& name = "fragment");
Fragment load_fragment(const std::filesystem::path& path);

/// Orthogonality graph of the fragment's vectors; every fragment basis is
/// one of its complete bases.
OrthogonalityGraph fragment_graph(const Fragment& f);

struct Atom {
  Valuation values;                 // over fragment vectors
  std::vector<int> outcome;         // per basis: index of the vector valued 1
};

std::vector<Atom> enumerate_atoms(const Fragment& f);

/// Rounds to p/q with q <= 10^4 when that is within 1e-12.
double snap_rational(double x);

struct InfeasibilityCertificate {
  /// "empty-atoms", "born" or "reciprocity".
  std::string reason;
  int state = -1;
  int atom = -1;
  LinearProgram system;
  FarkasCertificate y;
  FarkasCheck check;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<Atom> atoms;
  /// mu[i](l): weight of atom l in the preparation of state i.
  std::vector<Eigen::VectorXd> mu;
  std::optional<InfeasibilityCertificate> certificate;
  /// Largest constraint residual of mu.
  double residual = 0.0;
  std::string note;
};

/// Is there a finite model over the atoms with Born statistics, supports
/// inside each prepared ray's core, and Lambda_psi = Core(psi) for every
/// prepared state that is a fragment vector?
FeasibilityResult feasibility_max_epistemic(const Fragment& f);

struct PairOverlap {
  int phi = 0;  // state index
  int psi = 0;  // state index
  double born = 0.0;
  double f = 0.0;
};

struct OverlapBound {
  /// Empty when the atom set is empty or the Born system is infeasible.
  std::optional<double> f_star;
  std::string status;  // "optimal", "vacuous", "undefined-by-emptiness", "infeasible"
  std::vector<Atom> atoms;
  std::vector<Eigen::VectorXd> mu;
  std::vector<PairOverlap> pairs;
  std::optional<InfeasibilityCertificate> certificate;
  std::string caveat = "noncontextual-deterministic class";
};

OverlapBound max_overlap_fraction(const Fragment& f);

/// Wraps a finite model as an OntologicalModel over Atoms(n). Preparations
/// are defined for the fragment's states, responses for its vectors.
OntologicalModel finite_model(const Fragment& f, const std::vector<Atom>& atoms,
                              const std::vector<Eigen::VectorXd>& mu);

}  // namespace ontokit
