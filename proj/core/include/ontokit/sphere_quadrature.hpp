#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ontokit {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  explicit GaussLegendre(int n);
};

struct SphereIntegral {
  double value = 0.0;
  /// |I(level) - I(2 level)| when the cut planes do not share an axis, else 0.
  double error_estimate = 0.0;
  /// True when every cut plane contains the chosen polar axis, in which case
  /// each azimuthal cell is smooth and the rule converges spectrally.
  bool aligned = true;
};

/// Integrates f over the unit sphere with respect to surface area (total 4 pi).
///
/// `cuts` are normals of planes through the origin across which f may be
/// discontinuous or kinked. When all of them contain a common axis, the
/// rule uses that axis as its pole and splits azimuth at every cut, so a
/// piecewise-polynomial f is integrated to rounding error once level is a
/// little above its degree.
/// Otherwise each latitude circle is split where the cut planes cross it and
/// the result carries an error estimate from a doubled-level rerun.
SphereIntegral integrate_sphere(const std::function<double(const Eigen::Vector3d&)>& f,
                                const std::vector<Eigen::Vector3d>& cuts, int level);

/// Nodes and area weights of the plain product rule (no cuts, pole on z).
struct SphereNode {
  Eigen::Vector3d point;
  double weight;
};
std::vector<SphereNode> sphere_product_rule(int level);

}  // namespace ontokit
