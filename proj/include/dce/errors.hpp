#pragma once

#include <stdexcept>
#include <string>

namespace dce {

// Base of every error thrown by the library. The CLI maps subclasses of
// DomainFailure to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  InvalidParameter(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

class IoError : public Error {
public:
  using Error::Error;
};

class Cancelled : public Error {
public:
  Cancelled() : Error("operation cancelled") {}
};

/// Failures that reflect the physics of the requested configuration rather
/// than a malformed request.
class DomainFailure : public Error {
public:
  using Error::Error;
};

class PhysicalityError : public DomainFailure {
public:
  explicit PhysicalityError(double min_symplectic)
      : DomainFailure("covariance violates the uncertainty bound (min symplectic eigenvalue " +
                      std::to_string(min_symplectic) + ")"),
        min_symplectic_(min_symplectic) {}
  double min_symplectic() const noexcept { return min_symplectic_; }

private:
  double min_symplectic_;
};

class MarginalStability : public DomainFailure {
public:
  explicit MarginalStability(double max_re_eig)
      : DomainFailure("drift matrix is marginally stable (max Re eig = " +
                      std::to_string(max_re_eig) + ")"),
        max_re_eig_(max_re_eig) {}
  double max_re_eig() const noexcept { return max_re_eig_; }

private:
  double max_re_eig_;
};

class StepRejected : public DomainFailure {
public:
  StepRejected(double t, double error_estimate)
      : DomainFailure("integration step rejected at t = " + std::to_string(t) +
                      " (local error estimate " + std::to_string(error_estimate) + ")"),
        t_(t), estimate_(error_estimate) {}
  double time() const noexcept { return t_; }
  double estimate() const noexcept { return estimate_; }

private:
  double t_;
  double estimate_;
};

class NonConvergence : public DomainFailure {
public:
  using DomainFailure::DomainFailure;
};

class PoleError : public DomainFailure {
public:
  PoleError(std::string kernel, double omega)
      : DomainFailure("pole in " + kernel + " at omega = " + std::to_string(omega)),
        kernel_(std::move(kernel)) {}
  const std::string& kernel() const noexcept { return kernel_; }

private:
  std::string kernel_;
};

class IndeterminateRegime : public DomainFailure {
public:
  using DomainFailure::DomainFailure;
};

class BoundaryNotFound : public DomainFailure {
public:
  using DomainFailure::DomainFailure;
};

class UndefinedSqueezing : public DomainFailure {
public:
  using DomainFailure::DomainFailure;
};

class Infeasible : public DomainFailure {
public:
  using DomainFailure::DomainFailure;
};

class Unstable : public DomainFailure {
public:
  explicit Unstable(double max_re_eig)
      : DomainFailure("drift matrix is unstable (max Re eig = " + std::to_string(max_re_eig) + ")"),
        max_re_eig_(max_re_eig) {}
  double max_re_eig() const noexcept { return max_re_eig_; }

private:
  double max_re_eig_;
};

}  // namespace dce
