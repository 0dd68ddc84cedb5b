#pragma once

#include <stdexcept>
#include <string>

namespace dldl {

// Factorization failed: the matrix handed to solve_spd_system is not
// positive definite, or is too ill conditioned to meet the residual bound.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A hypergraph with a zero vertex or edge degree cannot be normalized.
class DegenerateHypergraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The alternating solver observed an objective increase. Always a bug,
// never a data problem.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// File content could not be parsed; message carries path and line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model file has a wrong magic, unsupported version, or a broken section.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dldl
