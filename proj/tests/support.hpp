#pragma once

#include <string>

#include "ontokit/hilbert.hpp"

namespace ontokit::test {

inline std::string data(const std::string& rel) { return std::string(ONTOKIT_DATA_DIR) + "/" + rel; }

inline PureState qubit(double re0, double im0, double re1, double im1) {
  CVector v(2);
  v << Complex(re0, im0), Complex(re1, im1);
  return PureState::normalized(v);
}

inline PureState from_reals(std::initializer_list<double> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return PureState::normalized(v);
}

}  // namespace ontokit::test
