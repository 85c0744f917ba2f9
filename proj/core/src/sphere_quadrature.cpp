#include "ontokit/sphere_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace ontokit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Frame {
  Eigen::Vector3d u, v, axis;
};

Frame frame_for(const Eigen::Vector3d& axis) {
  Eigen::Index k = 0;
  axis.cwiseAbs().minCoeff(&k);
  const Eigen::Vector3d e = Eigen::Vector3d::Unit(k);
  Frame f;
  f.axis = axis;
  f.u = e.cross(axis).normalized();
  f.v = axis.cross(f.u);
  return f;
}

std::vector<Eigen::Vector3d> distinct_planes(const std::vector<Eigen::Vector3d>& cuts) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& c : cuts) {
    const double n = c.norm();
    if (n < 1e-14) continue;
    const Eigen::Vector3d u = c / n;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Eigen::Vector3d& w) {
      return w.cross(u).norm() < 1e-12;
    });
    if (!dup) out.push_back(u);
  }
  return out;
}

// Integrates g(phi) over [0, 2 pi) split at the given breakpoints.
template <class G>
double integrate_azimuth(const G& g, std::vector<double> breaks, const GaussLegendre& gl, int trapezoid_n) {
  if (breaks.empty()) {
    double s = 0.0;
    for (int k = 0; k < trapezoid_n; ++k) s += g(kTwoPi * k / trapezoid_n);
    return s * kTwoPi / trapezoid_n;
  }
  for (auto& b : breaks) {
    b = std::fmod(b, kTwoPi);
    if (b < 0) b += kTwoPi;
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.push_back(breaks.front() + kTwoPi);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    if (hi - lo < 1e-15) continue;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * g(mid + half * gl.nodes[i]);
    total += s * half;
  }
  return total;
}

// Polar angles where the ring integral is not smooth: a cut circle is
// tangent to the latitude circle, or two cut circles cross on it.
std::vector<double> polar_breaks(const Frame& fr, const std::vector<Eigen::Vector3d>& planes) {
  std::vector<double> t;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const double h = std::sqrt(std::max(0.0, 1.0 - std::pow(planes[i].dot(fr.axis), 2)));
    t.push_back(h);
    t.push_back(-h);
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      const Eigen::Vector3d x = planes[i].cross(planes[j]);
      if (x.norm() < 1e-14) continue;
      const double z = x.normalized().dot(fr.axis);
      t.push_back(z);
      t.push_back(-z);
    }
  }
  std::vector<double> theta{0.0, std::numbers::pi};
  for (double z : t) theta.push_back(std::acos(std::clamp(z, -1.0, 1.0)));
  std::sort(theta.begin(), theta.end());
  theta.erase(std::unique(theta.begin(), theta.end(), [](double a, double b) { return b - a < 1e-13; }), theta.end());
  return theta;
}

double integrate_with_frame(const std::function<double(const Eigen::Vector3d&)>& f, const Frame& fr,
                            const std::vector<Eigen::Vector3d>& planes, bool aligned, int level) {
  const GaussLegendre polar(level);
  const GaussLegendre az(std::max(level, 12));
  // Integrand of the polar integral: sin(theta) times the ring integral.
  auto ring = [&](double theta) {
    const double t = std::cos(theta);
    const double s = std::sin(theta);
    auto point = [&](double phi) -> Eigen::Vector3d {
      return s * (std::cos(phi) * fr.u + std::sin(phi) * fr.v) + t * fr.axis;
    };
    std::vector<double> breaks;
    for (const auto& n : planes) {
      const double nu = n.dot(fr.u);
      const double nv = n.dot(fr.v);
      const double na = n.dot(fr.axis);
      const double r = s * std::hypot(nu, nv);
      const double base = std::atan2(nv, nu);
      if (aligned) {
        // Plane contains the axis: meridian pair where nu cos + nv sin = 0.
        breaks.push_back(base + 0.5 * std::numbers::pi);
        breaks.push_back(base - 0.5 * std::numbers::pi);
      } else if (r > std::abs(na * t)) {
        const double delta = std::acos(std::clamp(-na * t / r, -1.0, 1.0));
        breaks.push_back(base + delta);
        breaks.push_back(base - delta);
      }
    }
    return s * integrate_azimuth([&](double phi) { return f(point(phi)); }, std::move(breaks), az, 2 * level);
  };
  // Nodes in the polar angle rather than in cos(theta): the integrands met
  // here carry odd powers of sin(theta), which are smooth in theta.
  if (aligned) {
    double total = 0.0;
    for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
      total += polar.weights[i] * ring(0.5 * std::numbers::pi * (polar.nodes[i] + 1.0));
    }
    return 0.5 * std::numbers::pi * total;
  }
  // Each polar cell gets x = (3u - u^3) / 2, which flattens the square-root
  // behavior at tangent latitudes.
  const auto theta = polar_breaks(fr, planes);
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < theta.size(); ++c) {
    const double half = 0.5 * (theta[c + 1] - theta[c]);
    const double mid = 0.5 * (theta[c + 1] + theta[c]);
    for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
      const double u = polar.nodes[i];
      const double x = 0.5 * (3.0 * u - u * u * u);
      const double dx = 1.5 * (1.0 - u * u);
      total += polar.weights[i] * dx * half * ring(mid + half * x);
    }
  }
  return total;
}

}  // namespace

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre needs at least one node");
  nodes.resize(n);
  weights.resize(n);
  // P_n(x) and P_{n-1}(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, p0};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pn1] = legendre(x);
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pn1] = legendre(x);
    dp = n * (x * pn - pn1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

SphereIntegral integrate_sphere(const std::function<double(const Eigen::Vector3d&)>& f,
                                const std::vector<Eigen::Vector3d>& cuts, int level) {
  if (level < 1) throw std::invalid_argument("sphere quadrature level must be >= 1");
  const auto planes = distinct_planes(cuts);
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  bool aligned = true;
  if (planes.size() == 1) {
    axis = frame_for(planes[0]).u;  // any direction inside the plane
  } else if (planes.size() >= 2) {
    axis = planes[0].cross(planes[1]).normalized();
    aligned = std::all_of(planes.begin(), planes.end(),
                          [&](const Eigen::Vector3d& n) { return std::abs(n.dot(axis)) < 1e-10; });
    if (!aligned) axis = Eigen::Vector3d::UnitZ();
  }
  const Frame fr = frame_for(axis);
  SphereIntegral out;
  out.aligned = aligned;
  if (aligned) {
    out.value = integrate_with_frame(f, fr, planes, true, level);
  } else {
    const double coarse = integrate_with_frame(f, fr, planes, false, level);
    out.value = integrate_with_frame(f, fr, planes, false, 2 * level);
    out.error_estimate = std::abs(out.value - coarse);
  }
  return out;
}

std::vector<SphereNode> sphere_product_rule(int level) {
  const GaussLegendre polar(level);
  const int n_az = 2 * level;
  std::vector<SphereNode> out;
  out.reserve(static_cast<std::size_t>(level) * n_az);
  for (int i = 0; i < level; ++i) {
    const double t = polar.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (int k = 0; k < n_az; ++k) {
      const double phi = kTwoPi * (k + 0.5) / n_az;
      out.push_back({Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), t), polar.weights[i] * kTwoPi / n_az});
    }
  }
  return out;
}

}  // namespace ontokit
