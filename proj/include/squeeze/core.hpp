#pragma once

// Complex scalars and vectors, disc automorphisms, the normalization matrices
// of a C-convex domain, and the closed-form radii used by the certificates.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>

#include "squeeze/error.hpp"

namespace squeeze {

template <typename Scalar>
using Cplx = std::complex<Scalar>;

template <typename Scalar>
using CVec = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using CMat = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Cplxd = Cplx<double>;
using CVecd = CVec<double>;
using CMatd = CMat<double>;

inline constexpr double kAlgebraicTol = 1e-12;

// Sum of moduli.
template <typename Derived>
typename Derived::RealScalar norm1(const Eigen::MatrixBase<Derived>& z) {
  return z.cwiseAbs().sum();
}

template <typename Derived>
typename Derived::RealScalar norm2(const Eigen::MatrixBase<Derived>& z) {
  return z.norm();
}

// Largest modulus.
template <typename Derived>
typename Derived::RealScalar norm_inf(const Eigen::MatrixBase<Derived>& z) {
  return z.size() == 0 ? typename Derived::RealScalar(0) : z.cwiseAbs().maxCoeff();
}

// Largest entry modulus of a matrix.
template <typename Derived>
typename Derived::RealScalar max_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

/// Lower triangular matrix with unit diagonal and entries of modulus at most 1.
///
/// This is the shear that brings a C-convex domain into normal position. The
/// constructor rejects anything else, so a value of this type always satisfies
/// ‖A‖_max ≤ 1 and hence ‖A⁻¹‖_max ≤ (n−1)!.
template <typename Scalar>
class UnitTriangularMatrix {
public:
  explicit UnitTriangularMatrix(CMat<Scalar> entries, Scalar tol = Scalar(kAlgebraicTol))
      : a_(std::move(entries)) {
    if (a_.rows() != a_.cols() || a_.rows() < 1)
      throw Error(ErrorKind::Domain, "unit triangular matrix must be square and non-empty");
    const Eigen::Index n = a_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (a_(i, i) != Cplx<Scalar>(1))
        throw Error(ErrorKind::Domain, "diagonal entries must be exactly 1");
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (a_(i, j) != Cplx<Scalar>(0))
          throw Error(ErrorKind::Domain, "matrix is not lower triangular");
      for (Eigen::Index j = 0; j < i; ++j)
        if (!(std::abs(a_(i, j)) <= Scalar(1) + tol))
          throw Error(ErrorKind::Domain, "entry modulus exceeds 1");
    }
  }

  static UnitTriangularMatrix identity(Eigen::Index n) {
    return UnitTriangularMatrix(CMat<Scalar>::Identity(n, n));
  }

  Eigen::Index dim() const { return a_.rows(); }
  const CMat<Scalar>& matrix() const { return a_; }

  CVec<Scalar> apply(const CVec<Scalar>& z) const { return a_.template triangularView<Eigen::UnitLower>() * z; }

  // Forward substitution; never singular.
  CVec<Scalar> solve(const CVec<Scalar>& w) const {
    return a_.template triangularView<Eigen::UnitLower>().solve(w);
  }

  CMat<Scalar> inverse() const {
    return a_.template triangularView<Eigen::UnitLower>().solve(CMat<Scalar>::Identity(dim(), dim()));
  }

private:
  CMat<Scalar> a_;
};

/// Complex-linear isometry of Cⁿ (Tᴴ T = I within a tolerance).
template <typename Scalar>
class UnitaryMatrix {
public:
  explicit UnitaryMatrix(CMat<Scalar> entries, Scalar tol = Scalar(kAlgebraicTol))
      : t_(std::move(entries)) {
    if (t_.rows() != t_.cols() || t_.rows() < 1)
      throw Error(ErrorKind::Domain, "unitary matrix must be square and non-empty");
    const CMat<Scalar> gram = t_.adjoint() * t_;
    const Scalar defect = max_norm(gram - CMat<Scalar>::Identity(t_.rows(), t_.cols()));
    if (!(defect <= tol))
      throw Error(ErrorKind::Domain, "matrix is not unitary", {}, double(defect));
  }

  static UnitaryMatrix identity(Eigen::Index n) { return UnitaryMatrix(CMat<Scalar>::Identity(n, n)); }

  Eigen::Index dim() const { return t_.rows(); }
  const CMat<Scalar>& matrix() const { return t_; }
  CVec<Scalar> apply(const CVec<Scalar>& z) const { return t_ * z; }
  CVec<Scalar> apply_inverse(const CVec<Scalar>& w) const { return t_.adjoint() * w; }

private:
  CMat<Scalar> t_;
};

/// Disc automorphism t ↦ (t + ζ)/(1 + ζ̄t). It sends 0 to ζ and −ζ to 0; its
/// inverse is the automorphism with parameter −ζ.
template <typename Scalar>
class MobiusDisc {
public:
  explicit MobiusDisc(Cplx<Scalar> zeta) : zeta_(zeta) {
    if (!(std::abs(zeta) < Scalar(1)))
      throw Error(ErrorKind::Domain, "Mobius parameter must lie in the open unit disc", {Cplxd(zeta)});
  }

  Cplx<Scalar> zeta() const { return zeta_; }
  MobiusDisc inverse() const { return MobiusDisc(-zeta_); }

  Cplx<Scalar> operator()(Cplx<Scalar> t) const {
    const Cplx<Scalar> den = Scalar(1) + std::conj(zeta_) * t;
    if (std::abs(den) < Scalar(1e-300))
      throw Error(ErrorKind::SingularInput, "Mobius map evaluated at its pole", {Cplxd(t)});
    return (t + zeta_) / den;
  }

  // (1 − |ζ|²)/(1 + ζ̄t)²
  Cplx<Scalar> derivative(Cplx<Scalar> t) const {
    const Cplx<Scalar> den = Scalar(1) + std::conj(zeta_) * t;
    if (std::abs(den) < Scalar(1e-300))
      throw Error(ErrorKind::SingularInput, "Mobius map evaluated at its pole", {Cplxd(t)});
    return (Scalar(1) - std::norm(zeta_)) / (den * den);
  }

private:
  Cplx<Scalar> zeta_;
};

template <typename Scalar>
Cplx<Scalar> mobius_apply(const MobiusDisc<Scalar>& m, Cplx<Scalar> t) {
  return m(t);
}

/// Radius of the disc about 0 that the recentred lens competitor is known to
/// cover: (|ζ| + r′ − 1)/(1 − (1 − r′)|ζ|). Requires 1 − |ζ| ≤ r′; the boundary
/// case gives 0.
template <typename Scalar>
Scalar rho(Scalar abs_zeta, Scalar r_prime) {
  if (!(abs_zeta >= Scalar(0) && abs_zeta < Scalar(1)))
    throw Error(ErrorKind::Domain, "|zeta| must lie in [0,1)", {}, double(abs_zeta));
  if (!(r_prime > Scalar(0) && r_prime < Scalar(2)))
    throw Error(ErrorKind::Domain, "r' must lie in (0,2)", {}, double(r_prime));
  const Scalar num = abs_zeta + r_prime - Scalar(1);
  const Scalar den = Scalar(1) - (Scalar(1) - r_prime) * abs_zeta;
  if (num < Scalar(0) || !(den > Scalar(0)))
    throw Error(ErrorKind::Domain, "competitor radius undefined: need 1-|zeta| <= r'", {}, double(num));
  return num / den;
}

// lim (1 − ρ)/(1 − |ζ|) as |ζ| → 1
template <typename Scalar>
Scalar rho_limit_slope(Scalar r_prime) {
  if (!(r_prime > Scalar(0) && r_prime <= Scalar(2)))
    throw Error(ErrorKind::Domain, "r' must lie in (0,2]", {}, double(r_prime));
  return (Scalar(2) - r_prime) / r_prime;
}

/// Dimension-only radius d_n = 1/(16·n·n!). Any admissible A has entry sum of
/// A⁻¹ at most n²(n−1)! = n·n!, so the polydisc of radius 16·d_n lies in A(Eₙ).
template <typename Scalar = double>
Scalar dn_worst_case(int n) {
  if (n < 1) throw Error(ErrorKind::Domain, "dimension must be at least 1");
  Scalar fact(1);
  for (int k = 2; k <= n; ++k) fact *= Scalar(k);
  return Scalar(1) / (Scalar(16) * Scalar(n) * fact);
}

/// Per-matrix refinement of d_n: δ(A)/16 with δ(A) = 1/Σ|A⁻¹ᵢⱼ|.
template <typename Scalar>
Scalar dn_for_matrix(const UnitTriangularMatrix<Scalar>& a) {
  const CMat<Scalar> inv = a.inverse();
  if (!inv.allFinite()) throw Error(ErrorKind::SingularInput, "inverse of normalization matrix is not finite");
  const Scalar sum = inv.cwiseAbs().sum();
  return Scalar(1) / (Scalar(16) * sum);
}

template <typename Scalar>
Scalar cn(Scalar dn, int n) {
  if (!(dn > Scalar(0))) throw Error(ErrorKind::Domain, "d_n must be positive", {}, double(dn));
  if (n < 1) throw Error(ErrorKind::Domain, "dimension must be at least 1");
  return dn / std::sqrt(Scalar(n));
}

}  // namespace squeeze
