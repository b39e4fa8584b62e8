#pragma once

#include <variant>

#include <Eigen/Core>

namespace contactdd {

struct Isotropic {
  double E = 1.0;
  double nu = 0.0;
};

/// Transversely isotropic solid whose plane of isotropy is parallel to
/// x2 = 0 (the symmetry axis is x2).
///
/// Compliance convention: E, nu are the modulus and Poisson ratio inside the
/// isotropy plane; E_t is the modulus along x2; nu_t is the ratio giving the
/// in-plane contraction under a stress along x2 (eps11 = -nu_t/E_t * sig22);
/// G_t is the shear modulus in planes containing x2.
struct TransverselyIsotropic {
  double E = 1.0;
  double E_t = 1.0;
  double nu = 0.0;
  double nu_t = 0.0;
  double G_t = 0.5;
};

enum class Hypothesis { PlaneStress, PlaneStrain };

struct Material {
  std::variant<Isotropic, TransverselyIsotropic> law;
  Hypothesis hypothesis = Hypothesis::PlaneStress;
};

/// 3x3 matrix D with (s11, s22, s12) = D (e11, e22, 2 e12).
/// Throws InvalidMaterial if the parameters do not give an SPD matrix.
Eigen::Matrix3d constitutive_matrix(const Material& material);

struct SpectralBounds {
  double lower = 0.0;  // b
  double upper = 0.0;  // d
};

/// Extreme eigenvalues of the constitutive matrix, so that
/// lower*|e|^2 <= e^T D e <= upper*|e|^2 for Voigt strain vectors e.
SpectralBounds spectral_bounds(const Material& material);

}  // namespace contactdd
