#pragma once

#include <stdexcept>
#include <string>

namespace cpstar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NotAnAlgebra : public Error {
 public:
  using Error::Error;
};

class NoNormaliser : public Error {
 public:
  using Error::Error;
};

class MissingNormaliser : public Error {
 public:
  using Error::Error;
};

// Rank or spectrum too close to a decision threshold to call.
class NumericalAmbiguity : public Error {
 public:
  using Error::Error;
};

class StandardFormError : public Error {
 public:
  using Error::Error;
};

class NotCommutative : public Error {
 public:
  using Error::Error;
};

class NotABasis : public Error {
 public:
  using Error::Error;
};

class ObjectMismatch : public Error {
 public:
  using Error::Error;
};

class NotPantsForm : public Error {
 public:
  using Error::Error;
};

class NotStandardBasis : public Error {
 public:
  using Error::Error;
};

class InvalidGroupoid : public Error {
 public:
  using Error::Error;
};

class NotAGroupoidAlgebra : public Error {
 public:
  NotAGroupoidAlgebra(std::string axiom, const std::string& detail)
      : Error("not a groupoid algebra: " + axiom + (detail.empty() ? "" : " (" + detail + ")")),
        axiom_(std::move(axiom)) {}
  const std::string& axiom() const { return axiom_; }

 private:
  std::string axiom_;
};

class SizeBoundExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace cpstar
