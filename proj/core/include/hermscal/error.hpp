#pragma once

#include <stdexcept>
#include <string>

namespace hermscal {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed to reach its stated accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Circulant embedding produced a significantly negative eigenvalue.
class EmbeddingError : public NumericalError {
 public:
  EmbeddingError(const std::string& what, double min_eigenvalue)
      : NumericalError(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Requested scale has no boundary-free coefficients for the sample size.
class ScaleUnavailable : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Filter bank cannot support the requested process (e.g. too few moments).
class AdmissibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Experiment specification failed validation; `pointer` is a JSON pointer.
class SpecError : public std::invalid_argument {
 public:
  SpecError(std::string pointer, const std::string& message)
      : std::invalid_argument(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace hermscal
