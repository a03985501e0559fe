#include "dce/lyapunov.hpp"

#include "dce/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <complex>

namespace dce {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

void require_square_pair(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& d)
{
  if (a.rows() != a.cols() || a.rows() == 0) throw InvalidParameter("drift", "must be a nonempty square matrix");
  if (d.rows() != a.rows() || d.cols() != a.cols())
    throw InvalidParameter("diffusion", "must match the drift dimensions");
}

double operator_norm(const Eigen::MatrixXd& m)
{
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// A V + V A^T + D accumulated in extended precision.
Eigen::MatrixXd lyapunov_defect(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                const Eigen::Ref<const Eigen::MatrixXd>& v,
                                const Eigen::Ref<const Eigen::MatrixXd>& d)
{
  const LongMatrix al = a.cast<long double>();
  const LongMatrix vl = v.cast<long double>();
  const LongMatrix r = al * vl + vl * al.transpose() + d.cast<long double>();
  return r.cast<double>();
}

Eigen::VectorXd vec(const Eigen::MatrixXd& m) { return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()); }

Eigen::MatrixXd unvec(const Eigen::VectorXd& x, Eigen::Index n) { return Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n); }

// (I (x) A + A (x) I) acting on column-major vec(V).
Eigen::MatrixXd kronecker_sum(const Eigen::Ref<const Eigen::MatrixXd>& a)
{
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index l = 0; l < n; ++l) {
        k(i + n * j, l + n * j) += a(i, l);
        k(i + n * j, i + n * l) += a(j, l);
      }
  return k;
}

}  // namespace

double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& a)
{
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success) throw NonConvergence("eigenvalue iteration did not converge");
  return es.eigenvalues().real().maxCoeff();
}

double lyapunov_residual(const Eigen::Ref<const Eigen::MatrixXd>& a,
                         const Eigen::Ref<const Eigen::MatrixXd>& v,
                         const Eigen::Ref<const Eigen::MatrixXd>& d)
{
  const double r = operator_norm(lyapunov_defect(a, v, d));
  const double dn = operator_norm(d);
  return dn > 0 ? r / dn : r;
}

SteadyState solve_steady(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& d)
{
  require_square_pair(a, d);
  SteadyState out;
  out.max_re_eig = spectral_abscissa(a);
  if (std::abs(out.max_re_eig) < kMarginalThreshold) throw MarginalStability(out.max_re_eig);
  if (out.max_re_eig > 0) {
    out.stable = false;
    out.residual = std::nan("");
    return out;
  }
  out.stable = true;

  const Eigen::Index n = a.rows();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(kronecker_sum(a));
  Eigen::MatrixXd v = unvec(lu.solve(-vec(d)), n);
  if (!v.allFinite()) throw MarginalStability(out.max_re_eig);

  for (int sweep = 0; sweep < 3; ++sweep) {
    const Eigen::MatrixXd r = lyapunov_defect(a, v, d);
    if (r.cwiseAbs().maxCoeff() == 0.0) break;
    v += unvec(lu.solve(-vec(r)), n);
  }
  v = 0.5 * (v + v.transpose()).eval();

  out.residual = lyapunov_residual(a, v, d);
  out.v = std::move(v);
  return out;
}

SteadyState solve_steady(const DriftMatrix& a, const DiffusionMatrix& d)
{
  return solve_steady(Eigen::MatrixXd(a.matrix()), Eigen::MatrixXd(d.matrix()));
}

Eigen::MatrixXd solve_lyapunov_schur(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                     const Eigen::Ref<const Eigen::MatrixXd>& d)
{
  require_square_pair(a, d);
  using Complex = std::complex<double>;
  const Eigen::Index n = a.rows();

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a.cast<Complex>());
  if (schur.info() != Eigen::Success) throw NonConvergence("Schur decomposition did not converge");
  const Eigen::MatrixXcd& t = schur.matrixT();
  const Eigen::MatrixXcd& u = schur.matrixU();

  // T Y + Y T^H = F with F = -U^H D U, solved column by column from the right
  const Eigen::MatrixXcd f = -(u.adjoint() * d.cast<Complex>() * u);
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    Eigen::VectorXcd rhs = f.col(j);
    for (Eigen::Index k = j + 1; k < n; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
    Eigen::MatrixXcd shifted = t;
    shifted.diagonal().array() += std::conj(t(j, j));
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  const Eigen::MatrixXd v = (u * y * u.adjoint()).real();
  return 0.5 * (v + v.transpose());
}

namespace {

template <class Rhs>
Eigen::MatrixXd rk4_step(const Rhs& f, double t, const Eigen::MatrixXd& v, double h)
{
  const Eigen::MatrixXd k1 = f(t, v);
  const Eigen::MatrixXd k2 = f(t + h / 2, v + (h / 2) * k1);
  const Eigen::MatrixXd k3 = f(t + h / 2, v + (h / 2) * k2);
  const Eigen::MatrixXd k4 = f(t + h, v + h * k3);
  return v + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

template <class Rhs>
Eigen::MatrixXd integrate(const Rhs& f, Eigen::MatrixXd v, double t0, double t_final, double dt,
                          const IntegrationOptions& opts)
{
  if (!(dt > 0)) throw InvalidParameter("dt", "must be > 0");
  const double span = t_final - t0;
  if (!(span >= 0)) throw InvalidParameter("t_final", "must not precede the start time");
  if (span == 0) return v;

  const auto steps = static_cast<long long>(std::ceil(span / dt - 1e-12));
  const double h = span / static_cast<double>(steps);
  for (long long s = 0; s < steps; ++s) {
    if (opts.stop.stop_requested()) throw Cancelled();
    const double t = t0 + h * static_cast<double>(s);
    const Eigen::MatrixXd full = rk4_step(f, t, v, h);
    const Eigen::MatrixXd half = rk4_step(f, t + h / 2, rk4_step(f, t, v, h / 2), h / 2);
    const double estimate = (half - full).cwiseAbs().maxCoeff() / 15.0;
    if (estimate > opts.step_tolerance * std::max(1.0, half.cwiseAbs().maxCoeff())) throw StepRejected(t, estimate);
    v = 0.5 * (half + half.transpose());
  }
  return v;
}

}  // namespace

Eigen::MatrixXd integrate_covariance(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                     const Eigen::Ref<const Eigen::MatrixXd>& d,
                                     const Eigen::Ref<const Eigen::MatrixXd>& v0, double t_final, double dt,
                                     const IntegrationOptions& opts)
{
  require_square_pair(a, d);
  const Eigen::MatrixXd am = a;
  const Eigen::MatrixXd dm = d;
  auto f = [&](double, const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
    return am * v + v * am.transpose() + dm;
  };
  return integrate(f, v0, 0.0, t_final, dt, opts);
}

CovarianceMatrix integrate_covariance(const DriftMatrix& a, const DiffusionMatrix& d, const CovarianceMatrix& v0,
                                      double t_final, double dt, const IntegrationOptions& opts)
{
  const Eigen::MatrixXd v = integrate_covariance(Eigen::MatrixXd(a.matrix()), Eigen::MatrixXd(d.matrix()),
                                                 Eigen::MatrixXd(v0.matrix()), t_final, dt, opts);
  return CovarianceMatrix(Matrix6(v));
}

Eigen::MatrixXd propagate_covariance(const DriftFunction& a, const Eigen::Ref<const Eigen::MatrixXd>& d,
                                     const Eigen::Ref<const Eigen::MatrixXd>& v0, double t0, double t_final,
                                     double dt, const IntegrationOptions& opts)
{
  const Eigen::MatrixXd dm = d;
  auto f = [&](double t, const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
    const Eigen::MatrixXd at = a(t);
    return at * v + v * at.transpose() + dm;
  };
  return integrate(f, v0, t0, t_final, dt, opts);
}

}  // namespace dce
