// Error hierarchy shared by all mfv components.
//
// Two kinds matter to callers: validation errors (bad geometry, bad mesh,
// bad configuration) and numerical errors (factorization breakdown,
// non-convergence). The CLI maps them to exit codes 2 and 3.

#ifndef MFV_ERRORS_HPP
#define MFV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mfv {

class Error : public std::runtime_error {
public:
  enum class Kind { Validation, Numerical };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

class GeometryError : public Error {
public:
  explicit GeometryError(const std::string& what) : Error(Kind::Validation, what) {}
};

class MeshError : public Error {
public:
  explicit MeshError(const std::string& what) : Error(Kind::Validation, what) {}
};

class ProblemError : public Error {
public:
  explicit ProblemError(const std::string& what) : Error(Kind::Validation, what) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(Kind::Validation, what) {}
};

class SolverError : public Error {
public:
  explicit SolverError(const std::string& what) : Error(Kind::Numerical, what) {}
};

class SchemeError : public Error {
public:
  explicit SchemeError(const std::string& what) : Error(Kind::Numerical, what) {}
};

class AnalysisError : public Error {
public:
  explicit AnalysisError(const std::string& what) : Error(Kind::Validation, what) {}
};

}  // namespace mfv

#endif
