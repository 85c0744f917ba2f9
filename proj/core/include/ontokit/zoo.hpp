#pragma once

#include <string>
#include <vector>

#include "ontokit/framework.hpp"

namespace ontokit {

/// Point-mass model over rays: mu = delta(lambda - psi), xi = |<lambda|phi>|^2.
OntologicalModel make_bb(int dim);
/// Qubit model on the Bloch sphere: cosine-lobe density about n_psi and a
/// hemisphere indicator response.
OntologicalModel make_ks();
/// Qubit model: ray plus a uniform threshold x in [0,1].
OntologicalModel make_bell2();
/// Ray plus a vector of d standard complex Gaussians; outcome i wins when
/// |a_i / b_i| is strictly largest.
OntologicalModel make_ws(int dim);

/// Outcome index for amplitudes a_j = <j|psi> and b_j = <j|b>.
/// Ties go to the lowest index; b_j = 0 gives an infinite ratio unless
/// a_j = 0 too, in which case the ratio is 0.
int ws_outcome(const CVector& a, const CVector& b);

/// First element of a qubit basis {phi, phi_perp}: the one whose Bloch
/// vector is lexicographically smaller in (x, y, z).
PureState bell2_first(const PureState& phi);

class UnknownModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "bb", "bb:4", "ks", "bell2", "ws", "ws:3", ...
OntologicalModel make_model(const std::string& name);
std::vector<std::string> model_names();
/// The implemented models at their default dimensions.
std::vector<OntologicalModel> zoo();

struct TableEntry {
  int row;
  std::string display_name;
  std::string type;
  bool reciprocal;
  bool deterministic;
  bool contextual;
  /// Empty for entries without an implementation.
  std::string model_name;
};

/// All seven reference rows, in order.
std::vector<TableEntry> reference_table();

}  // namespace ontokit
