#include "dce/model.hpp"

#include "dce/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace dce {

namespace {

void require(bool ok, const char* field, const char* what)
{
  if (!ok) throw InvalidParameter(field, what);
}

void validate(const ModelInputs& in)
{
  const std::array<std::pair<const char*, double>, 10> all{{{"kappa", in.kappa},
                                                             {"gamma_m", in.gamma_m},
                                                             {"gamma_d", in.gamma_d},
                                                             {"g", in.g_m},
                                                             {"G", in.g_d},
                                                             {"lambda_m", in.lambda_m},
                                                             {"lambda_d", in.lambda_d},
                                                             {"nbar_m", in.nbar_m},
                                                             {"nbar_d", in.nbar_d},
                                                             {"nbar_ph", in.nbar_ph}}};
  for (const auto& [name, value] : all) require(std::isfinite(value), name, "must be finite");

  require(in.kappa > 0, "kappa", "must be > 0");
  require(in.gamma_m > 0, "gamma_m", "must be > 0");
  require(in.gamma_d > 0, "gamma_d", "must be > 0");
  require(in.g_m >= 0, "g", "must be >= 0");
  require(in.g_d >= 0, "G", "must be >= 0");
  require(in.lambda_m >= 0, "lambda_m", "must be >= 0");
  require(in.lambda_d >= 0, "lambda_d", "must be >= 0");
  require(in.nbar_m >= 0, "nbar_m", "must be >= 0");
  require(in.nbar_d >= 0, "nbar_d", "must be >= 0");
  require(in.nbar_ph >= 0, "nbar_ph", "must be >= 0");
}

}  // namespace

ModelParams::ModelParams(const ModelInputs& in)
{
  validate(in);
  const double k = in.kappa;
  r_ = in;
  r_.kappa = 1.0;
  r_.gamma_m = in.gamma_m / k;
  r_.gamma_d = in.gamma_d / k;
  r_.g_m = in.g_m / k;
  r_.g_d = in.g_d / k;
  r_.lambda_m = in.lambda_m / k;
  r_.lambda_d = in.lambda_d / k;
  scale_ = k;
}

ModelParams::ModelParams(const ModelInputs& normalized, double scale) : r_(normalized), scale_(scale)
{
  validate(r_);
}

ModelParams ModelParams::with_lambda_m(double v) const
{
  ModelInputs n = r_;
  n.lambda_m = v;
  return ModelParams(n, scale_);
}

ModelParams ModelParams::with_lambda_d(double v) const
{
  ModelInputs n = r_;
  n.lambda_d = v;
  return ModelParams(n, scale_);
}

ModelParams ModelParams::with_g_m(double v) const
{
  ModelInputs n = r_;
  n.g_m = v;
  return ModelParams(n, scale_);
}

ModelParams ModelParams::with_g_d(double v) const
{
  ModelInputs n = r_;
  n.g_d = v;
  return ModelParams(n, scale_);
}

CovarianceMatrix::CovarianceMatrix(const Matrix6& v)
{
  if (!v.allFinite()) throw InvalidParameter("covariance", "contains non-finite entries");
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidParameter("covariance", "not symmetric within 1e-12");
  v_ = 0.5 * (v + v.transpose());
}

DriftMatrix build_drift(const ModelParams& p)
{
  const double k = p.kappa();
  const double g = p.g_m();
  const double G = p.g_d();
  Matrix6 a = Matrix6::Zero();

  a(0, 0) = -k / 2;
  a(1, 1) = -k / 2;
  a(2, 2) = p.lambda_m() - p.gamma_m() / 2;
  a(3, 3) = -(p.lambda_m() + p.gamma_m() / 2);
  a(4, 4) = p.lambda_d() - p.gamma_d() / 2;
  a(5, 5) = -(p.lambda_d() + p.gamma_d() / 2);

  a(0, 3) = -g;
  a(0, 5) = G;
  a(1, 2) = g;
  a(1, 4) = -G;
  a(2, 1) = -g;
  a(3, 0) = g;
  a(4, 1) = G;
  a(5, 0) = -G;
  return DriftMatrix(a);
}

DiffusionMatrix build_diffusion(const ModelParams& p)
{
  const double ph = p.kappa() / 2 * (2 * p.nbar_ph() + 1);
  const double m = p.gamma_m() / 2 * (2 * p.nbar_m() + 1);
  const double d = p.gamma_d() / 2 * (2 * p.nbar_d() + 1);
  Matrix6 diag = Matrix6::Zero();
  diag.diagonal() << ph, ph, m, m, d, d;
  return DiffusionMatrix(diag);
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v)
{
  const Eigen::Index n = v.rows();
  const Eigen::Index modes = n / 2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (v + v.transpose()));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0)
    return Eigen::VectorXd::Zero(modes);

  // V^{1/2} Omega V^{1/2} is antisymmetric with eigenvalues +-i nu_k; its
  // negated square is symmetric PSD with each nu_k^2 appearing twice.
  const Eigen::MatrixXd root = es.operatorSqrt();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  const Eigen::MatrixXd m = root * omega * root;
  const Eigen::MatrixXd sq = -(m * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(0.5 * (sq + sq.transpose()), Eigen::EigenvaluesOnly);
  Eigen::VectorXd nu(modes);
  for (Eigen::Index k = 0; k < modes; ++k) {
    // eigenvalues ascend, pairs are (2k, 2k+1); average the pair
    const double s = 0.5 * (ms.eigenvalues()(2 * k) + ms.eigenvalues()(2 * k + 1));
    nu(k) = std::sqrt(std::max(s, 0.0));
  }
  return nu;
}

double mode_occupation(const Eigen::Ref<const Eigen::MatrixXd>& v, Mode m)
{
  return (v(x_index(m), x_index(m)) + v(p_index(m), p_index(m)) - 1.0) / 2.0;
}

Occupations occupations(const CovarianceMatrix& v)
{
  const double nu_min = symplectic_eigenvalues(v.matrix()).minCoeff();
  if (nu_min < 0.5 - kPhysicalityTolerance) throw PhysicalityError(nu_min);

  Occupations out;
  auto take = [&](Mode m) {
    double n = mode_occupation(v.matrix(), m);
    // the mode's own symplectic eigenvalue is at most n + 1/2
    if (n < -kClampTolerance) throw PhysicalityError(n + 0.5);
    if (n < 0) {
      out.clamped = true;
      n = 0.0;
    }
    return n;
  };
  out.photon = take(Mode::cavity);
  out.phonon_m = take(Mode::mirror);
  out.phonon_d = take(Mode::bogoliubov);
  return out;
}

CollectiveMode collective_mode_occupation(const CovarianceMatrix& v, const ModelParams& p)
{
  if (!(p.g_d() > p.g_m()))
    throw UndefinedSqueezing("collective mode requires G > g (squeezing parameter artanh(g/G) undefined)");

  const double r = std::atanh(p.g_m() / p.g_d());
  const double c = std::cosh(r);
  const double s = std::sinh(r);

  // X_B = c X_b - s X_d, P_B = c P_b + s P_d
  Eigen::Matrix<double, 2, 6> t = Eigen::Matrix<double, 2, 6>::Zero();
  t(0, x_index(Mode::mirror)) = c;
  t(0, x_index(Mode::bogoliubov)) = -s;
  t(1, p_index(Mode::mirror)) = c;
  t(1, p_index(Mode::bogoliubov)) = s;
  const Eigen::Matrix2d vb = t * v.matrix() * t.transpose();

  return {(vb(0, 0) + vb(1, 1) - 1.0) / 2.0, r};
}

}  // namespace dce
