#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ContractViolation : public Error {
 public:
  using Error::Error;
};

class SpectralMismatch : public Error {
 public:
  using Error::Error;
};

class NumericalInconsistency : public Error {
 public:
  using Error::Error;
};

class VanishingSuccess : public Error {
 public:
  using Error::Error;
};

class PptViolation : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class RefusalError : public Error {
 public:
  using Error::Error;
};

class CutoffError : public Error {
 public:
  CutoffError(const std::string& what, int suggested_n_max)
      : Error(what), suggested_(suggested_n_max) {}
  int suggested_n_max() const { return suggested_; }

 private:
  int suggested_;
};

// Support of I (x) tau misses part of the operator; carries the offending kernel vector.
class InvertibilityError : public Error {
 public:
  InvertibilityError(const std::string& what, std::vector<double> re, std::vector<double> im)
      : Error(what), re_(std::move(re)), im_(std::move(im)) {}
  const std::vector<double>& direction_re() const { return re_; }
  const std::vector<double>& direction_im() const { return im_; }

 private:
  std::vector<double> re_, im_;
};

class SearchFailure : public Error {
 public:
  SearchFailure(const std::string& what, double best_value, std::vector<double> best_params)
      : Error(what), best_value_(best_value), best_params_(std::move(best_params)) {}
  double best_value() const { return best_value_; }
  const std::vector<double>& best_params() const { return best_params_; }

 private:
  double best_value_;
  std::vector<double> best_params_;
};

}  // namespace qb
