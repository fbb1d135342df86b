#ifndef PUF_ERRORS_HPP
#define PUF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace puf {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
      public:
	explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Inputs violate a precondition (mismatched lengths, mixed devices, bad ranges).
class ValidationError : public Error {
      public:
	explicit ValidationError(const std::string &msg) : Error(msg) {}
};

/// A parameter set that can never work (e.g. more errors to avoid than free positions).
class InfeasibleParamsError : public Error {
      public:
	explicit InfeasibleParamsError(const std::string &msg) : Error(msg) {}
};

/// Noise targets that the cell model cannot reproduce.
class CalibrationError : public Error {
      public:
	explicit CalibrationError(const std::string &msg) : Error(msg) {}
};

/// File parsing / serialization problems.
class IoError : public Error {
      public:
	explicit IoError(const std::string &msg) : Error(msg) {}
};

} // namespace puf

#endif
