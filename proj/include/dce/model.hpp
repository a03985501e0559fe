#pragma once

#include <Eigen/Core>

#include <array>

namespace dce {

using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Mode index into the quadrature vector (X_a, P_a, X_b, P_b, X_d, P_d).
enum class Mode : int { cavity = 0, mirror = 1, bogoliubov = 2 };

inline constexpr int x_index(Mode m) { return 2 * static_cast<int>(m); }
inline constexpr int p_index(Mode m) { return 2 * static_cast<int>(m) + 1; }

/// Raw, possibly unnormalized rates. Couplings and modulations are real
/// amplitudes; the modulation phases are fixed so that both are non-negative.
struct ModelInputs {
  double kappa = 1.0;
  double gamma_m = 1e-4;
  double gamma_d = 1e-4;
  double g_m = 0.0;  ///< enhanced mirror-cavity coupling
  double g_d = 0.0;  ///< enhanced BEC-cavity coupling
  double lambda_m = 0.0;
  double lambda_d = 0.0;
  double nbar_m = 0.0;
  double nbar_d = 0.0;
  double nbar_ph = 0.0;
};

/// One validated system instance. All rates are stored in units of the
/// cavity decay rate, so kappa() is always 1; kappa_scale() remembers the
/// original value for reporting.
class ModelParams {
public:
  /// Throws InvalidParameter naming the offending field.
  explicit ModelParams(const ModelInputs& in);

  double kappa() const noexcept { return r_.kappa; }
  double gamma_m() const noexcept { return r_.gamma_m; }
  double gamma_d() const noexcept { return r_.gamma_d; }
  double g_m() const noexcept { return r_.g_m; }
  double g_d() const noexcept { return r_.g_d; }
  double lambda_m() const noexcept { return r_.lambda_m; }
  double lambda_d() const noexcept { return r_.lambda_d; }
  double nbar_m() const noexcept { return r_.nbar_m; }
  double nbar_d() const noexcept { return r_.nbar_d; }
  double nbar_ph() const noexcept { return r_.nbar_ph; }
  double kappa_scale() const noexcept { return scale_; }

  /// Normalized rates (kappa == 1).
  const ModelInputs& inputs() const noexcept { return r_; }

  /// Copies with one field replaced; arguments are in units of kappa.
  ModelParams with_lambda_m(double v) const;
  ModelParams with_lambda_d(double v) const;
  ModelParams with_g_m(double v) const;
  ModelParams with_g_d(double v) const;

  /// xi = 2 lambda / gamma for each phononic channel.
  double xi_m() const noexcept { return 2.0 * r_.lambda_m / r_.gamma_m; }
  double xi_d() const noexcept { return 2.0 * r_.lambda_d / r_.gamma_d; }

private:
  ModelParams(const ModelInputs& normalized, double scale);
  ModelInputs r_;
  double scale_ = 1.0;
};

class DriftMatrix {
public:
  explicit DriftMatrix(const Matrix6& a) : a_(a) {}
  const Matrix6& matrix() const noexcept { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }

private:
  Matrix6 a_;
};

class DiffusionMatrix {
public:
  explicit DiffusionMatrix(const Matrix6& d) : d_(d) {}
  const Matrix6& matrix() const noexcept { return d_; }
  double operator()(int i, int j) const { return d_(i, j); }

private:
  Matrix6 d_;
};

/// Symmetric quadrature covariance V_ij = <u_i u_j + u_j u_i>/2.
class CovarianceMatrix {
public:
  /// Rejects matrices asymmetric beyond 1e-12 absolute, then symmetrizes.
  explicit CovarianceMatrix(const Matrix6& v);
  const Matrix6& matrix() const noexcept { return v_; }
  double operator()(int i, int j) const { return v_(i, j); }

private:
  Matrix6 v_;
};

DriftMatrix build_drift(const ModelParams& p);
DiffusionMatrix build_diffusion(const ModelParams& p);

/// Symplectic eigenvalues of a 2n x 2n covariance in (X,P) pair ordering,
/// ascending. Returns zeros when v is not positive definite.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v);

inline constexpr double kPhysicalityTolerance = 1e-6;
inline constexpr double kClampTolerance = 1e-9;

struct Occupations {
  double photon = 0.0;
  double phonon_m = 0.0;
  double phonon_d = 0.0;
  bool clamped = false;  ///< a slightly negative value was reset to 0
};

/// n = (V_XX + V_PP - 1)/2 per mode. Throws PhysicalityError when the
/// smallest symplectic eigenvalue is below 1/2 - kPhysicalityTolerance.
Occupations occupations(const CovarianceMatrix& v);

/// Occupation of a single (X,P) block without the physicality check.
double mode_occupation(const Eigen::Ref<const Eigen::MatrixXd>& v, Mode m);

struct CollectiveMode {
  double occupation = 0.0;
  double squeezing = 0.0;  ///< r = artanh(g_m / g_d)
};

/// Occupation of B = cosh(r) b - sinh(r) d^dag. Requires g_d > g_m >= 0,
/// otherwise throws UndefinedSqueezing.
CollectiveMode collective_mode_occupation(const CovarianceMatrix& v, const ModelParams& p);

}  // namespace dce
