#include "qndsqueeze/moments.hpp"

#include <cmath>
#include <map>

#include "qndsqueeze/errors.hpp"

namespace qnd {

MomentState css_atoms(double atom_number) {
  if (!(atom_number >= 0.0)) throw DomainError("atom number must be non-negative");
  MomentState s;
  s.species = Species::Atoms;
  s.label = "atoms";
  s.total = atom_number;
  s.mean = {0.0, atom_number / 2.0, 0.0};
  s.cov.diagonal() << atom_number / 4.0, 0.0, atom_number / 4.0;
  return s;
}

MomentState css_light(double photon_number, int x_sign, std::string label) {
  if (!(photon_number >= 0.0)) throw DomainError("photon number must be non-negative");
  if (x_sign != 1 && x_sign != -1) throw DomainError("x_sign must be +1 or -1");
  MomentState s;
  s.species = Species::Light;
  s.label = std::move(label);
  s.total = photon_number;
  s.mean = {x_sign * photon_number / 2.0, 0.0, 0.0};
  s.cov = Eigen::Matrix3d::Identity() * (photon_number / 4.0);
  return s;
}

double RotationAngle::mean() const {
  return coeff.size() == 0 ? offset : offset + coeff.dot(input_mean);
}

double RotationAngle::variance() const {
  return coeff.size() == 0 ? 0.0 : coeff.dot(input_cov * coeff);
}

RotationAngle RotationAngle::scalar(double value) {
  RotationAngle a;
  a.offset = value;
  return a;
}

RotationAngle& RotationAngle::add_term(std::string op, double coefficient, double op_mean,
                                       double op_variance) {
  if (!(op_variance >= 0.0)) throw DomainError("operator variance must be non-negative");
  const Eigen::Index n = coeff.size();
  operators.push_back(std::move(op));
  coeff.conservativeResize(n + 1);
  input_mean.conservativeResize(n + 1);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n + 1, n + 1);
  if (n > 0) cov.topLeftCorner(n, n) = input_cov;
  cov(n, n) = op_variance;
  input_cov = std::move(cov);
  coeff(n) = coefficient;
  input_mean(n) = op_mean;
  return *this;
}

Eigen::Matrix3d rotation_z(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix3d r;
  r << c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

MomentState rotate_z(const MomentState& state, const RotationAngle& theta) {
  const double var = theta.variance();
  if (!std::isfinite(var)) throw DomainError("rotation angle variance must be finite");
  const double t = theta.mean();
  const Eigen::Matrix3d r = rotation_z(t);
  const double c = std::cos(t);
  const double s = std::sin(t);
  const Eigen::Vector3d v{-s * state.mean.x() + c * state.mean.y(),
                          -c * state.mean.x() - s * state.mean.y(), 0.0};
  MomentState out = state;
  out.mean = r * state.mean;
  out.cov = r * state.cov * r.transpose() + var * v * v.transpose();
  return out;
}

Eigen::Matrix3d beamsplitter_map() {
  Eigen::Matrix3d b;
  b << 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0, -1.0, 0.0;
  return b;
}

MomentState output_beamsplitter(const MomentState& state) {
  if (state.species != Species::Light) {
    throw UsageError("output beamsplitter applies to light fields only");
  }
  const Eigen::Matrix3d b = beamsplitter_map();
  MomentState out = state;
  out.mean = b * state.mean;
  out.cov = b * state.cov * b.transpose();
  return out;
}

MomentState inverse_output_beamsplitter(const MomentState& state) {
  if (state.species != Species::Light) {
    throw UsageError("output beamsplitter applies to light fields only");
  }
  const Eigen::Matrix3d bt = beamsplitter_map().transpose();
  MomentState out = state;
  out.mean = bt * state.mean;
  out.cov = bt * state.cov * bt.transpose();
  return out;
}

LinearObservable& LinearObservable::add(std::string source, double coefficient, double variance) {
  if (!(variance >= 0.0)) throw DomainError("source variance must be non-negative");
  sources.push_back(std::move(source));
  coeff.push_back(coefficient);
  source_variance.push_back(variance);
  return *this;
}

double LinearObservable::variance() const {
  // Duplicate source names refer to the same fluctuation, so coefficients
  // are merged before squaring.
  std::map<std::string, std::pair<double, double>> merged;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    auto& [c, v] = merged[sources[k]];
    c += coeff[k];
    v = source_variance[k];
  }
  double total = 0.0;
  for (const auto& [name, cv] : merged) total += cv.first * cv.first * cv.second;
  return total;
}

double LinearObservable::coefficient(const std::string& source) const {
  double c = 0.0;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    if (sources[k] == source) c += coeff[k];
  }
  return c;
}

}  // namespace qnd
