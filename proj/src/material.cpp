#include "contactdd/material.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "contactdd/errors.hpp"

namespace contactdd {

namespace {

Eigen::Matrix3d isotropic_matrix(const Isotropic& m, Hypothesis h) {
  if (!(m.E > 0.0)) throw InvalidMaterial("Young's modulus must be positive");
  Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
  if (h == Hypothesis::PlaneStress) {
    if (!(m.nu > -1.0 && m.nu < 1.0)) throw InvalidMaterial("plane stress needs -1 < nu < 1");
    const double f = m.E / (1.0 - m.nu * m.nu);
    D << f, f * m.nu, 0.0, f * m.nu, f, 0.0, 0.0, 0.0, f * (1.0 - m.nu) / 2.0;
  } else {
    if (!(m.nu > -1.0 && m.nu < 0.5)) throw InvalidMaterial("plane strain needs -1 < nu < 0.5");
    const double f = m.E / ((1.0 + m.nu) * (1.0 - 2.0 * m.nu));
    D << f * (1.0 - m.nu), f * m.nu, 0.0, f * m.nu, f * (1.0 - m.nu), 0.0, 0.0, 0.0,
        f * (1.0 - 2.0 * m.nu) / 2.0;
  }
  return D;
}

Eigen::Matrix3d transverse_matrix(const TransverselyIsotropic& m, Hypothesis h) {
  if (!(m.E > 0.0 && m.E_t > 0.0 && m.G_t > 0.0)) {
    throw InvalidMaterial("moduli E, E_t, G_t must be positive");
  }
  // 3D normal compliance in the order (x1, x2, x3); x1 and x3 span the
  // isotropy plane.
  Eigen::Matrix3d S3;
  S3 << 1.0 / m.E, -m.nu_t / m.E_t, -m.nu / m.E,  //
      -m.nu_t / m.E_t, 1.0 / m.E_t, -m.nu_t / m.E_t,  //
      -m.nu / m.E, -m.nu_t / m.E_t, 1.0 / m.E;

  Eigen::Matrix2d S2 = S3.topLeftCorner<2, 2>();
  if (h == Hypothesis::PlaneStrain) {
    if (S3.llt().info() != Eigen::Success) {
      throw InvalidMaterial("transversely isotropic compliance is not positive definite");
    }
    S2 -= S3.block<2, 1>(0, 2) * S3.block<1, 2>(2, 0) / S3(2, 2);
  }
  Eigen::Matrix3d S = Eigen::Matrix3d::Zero();
  S.topLeftCorner<2, 2>() = S2;
  S(2, 2) = 1.0 / m.G_t;
  if (S.llt().info() != Eigen::Success) {
    throw InvalidMaterial("plane compliance is not positive definite");
  }
  Eigen::Matrix3d D = S.inverse();
  return 0.5 * (D + D.transpose());
}

}  // namespace

Eigen::Matrix3d constitutive_matrix(const Material& material) {
  const Eigen::Matrix3d D = std::visit(
      [&](const auto& law) -> Eigen::Matrix3d {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Isotropic>) {
          return isotropic_matrix(law, material.hypothesis);
        } else {
          return transverse_matrix(law, material.hypothesis);
        }
      },
      material.law);
  if (D.llt().info() != Eigen::Success) {
    throw InvalidMaterial("constitutive matrix is not positive definite");
  }
  return D;
}

SpectralBounds spectral_bounds(const Material& material) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(constitutive_matrix(material));
  return {eig.eigenvalues()(0), eig.eigenvalues()(2)};
}

}  // namespace contactdd
