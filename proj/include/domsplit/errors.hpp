#pragma once

#include <stdexcept>
#include <string>

namespace domsplit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UndefinedAction : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// A factor that had to be inverted is singular.
class SingularFactor : public Error {
 public:
  SingularFactor(long index, const std::string& what)
      : Error(what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

/// A partial product of the cocycle vanished.
class DegenerateCocycle : public Error {
 public:
  DegenerateCocycle(long index, const std::string& what)
      : Error(what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

/// Energy too close to the spectrum for the requested computation.
class IllConditioned : public Error {
 public:
  IllConditioned(double delta, const std::string& what)
      : Error(what), delta_(delta) {}
  double delta() const noexcept { return delta_; }

 private:
  double delta_;
};

}  // namespace domsplit

namespace domsplit {

/// Malformed configuration or data file.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace domsplit
