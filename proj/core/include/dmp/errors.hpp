#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dmp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Bodies that are unbounded, lack interior, or have non-spanning normals.
class GeometryError : public Error
{
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Requested size exceeds what the exact algorithms handle.
class CapabilityError : public Error
{
public:
  using Error::Error;
};

/// A caller-checked precondition failed (e.g. prefix condition of a bound).
class PreconditionError : public Error
{
public:
  PreconditionError(const std::string& what, int index)
    : Error(what), index_(index) {}

  int index() const { return index_; }

private:
  int index_;
};

/// A user-supplied integrand returned a non-finite value at a grid node.
class EvaluationError : public Error
{
public:
  EvaluationError(const std::string& what, std::vector<double> node)
    : Error(what), node_(std::move(node)) {}

  const std::vector<double>& node() const { return node_; }

private:
  std::vector<double> node_;
};

/// Malformed input file or value. `field` names the offending JSON path.
class ValidationError : public Error
{
public:
  ValidationError(const std::string& field, const std::string& what)
    : Error(field + ": " + what), field_(field) {}

  const std::string& field() const { return field_; }

private:
  std::string field_;
};

} // namespace dmp
