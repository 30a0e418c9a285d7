#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qnd {

enum class Species { Atoms, Light };

/// Mean vector and covariance of a collective pseudospin (F_x, F_y, F_z) or
/// Stokes vector (S_x, S_y, S_z), together with the particle number.
struct MomentState {
  Species species = Species::Atoms;
  std::string label;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double total = 0.0;

  double variance(int axis) const { return cov(axis, axis); }
};

// Coherent spin state of N atoms pointing along +y.
MomentState css_atoms(double atom_number);

// Coherent two-mode light with Stokes vector along x_sign * x.
MomentState css_light(double photon_number, int x_sign, std::string label = "light");

/// Operator-valued rotation angle
///   theta = offset + sum_k coeff_k * O_k
/// where the O_k are operators of the *other* system (photon numbers, S_z,
/// F_z, N_at, ...). Their means and covariance are carried with the angle.
struct RotationAngle {
  double offset = 0.0;
  std::vector<std::string> operators;
  Eigen::VectorXd coeff;
  Eigen::VectorXd input_mean;
  Eigen::MatrixXd input_cov;

  double mean() const;
  double variance() const;

  static RotationAngle scalar(double value);

  // Appends one term. Terms added this way are uncorrelated with earlier ones.
  RotationAngle& add_term(std::string op, double coefficient, double op_mean, double op_variance);
};

// R_z(theta) acting as X_out = R X_in, R = [[c, s, 0], [-s, c, 0], [0, 0, 1]].
Eigen::Matrix3d rotation_z(double theta);

/// Rotates a state about z by an operator-valued angle. The mean rotates by
/// <theta>; the covariance is conjugated by R(<theta>) and picks up the
/// angle-noise term Var(theta) v v^T, v = dR/dtheta <X>. Terms of fourth
/// order in the coupling are dropped.
MomentState rotate_z(const MomentState& state, const RotationAngle& theta);

// Output beamsplitter of the interferometer: S_dx = S_z, S_dy = -S_x, S_dz = -S_y.
Eigen::Matrix3d beamsplitter_map();
MomentState output_beamsplitter(const MomentState& state);
MomentState inverse_output_beamsplitter(const MomentState& state);

/// First-order observable y = mean + sum_k c_k delta_k over independent
/// fluctuation sources delta_k with known variances. Used where several
/// fields share one atomic operator and their cross-correlation matters.
struct LinearObservable {
  double mean = 0.0;
  std::vector<std::string> sources;
  std::vector<double> coeff;
  std::vector<double> source_variance;

  LinearObservable& add(std::string source, double coefficient, double variance);
  double variance() const;
  // Combined coefficient of one source (sums duplicates).
  double coefficient(const std::string& source) const;
};

}  // namespace qnd
