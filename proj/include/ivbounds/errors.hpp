#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ivb {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- model -----------------------------------------------------------------

struct SupportTooSmall : Error {
  explicit SupportTooSmall(std::size_t n)
      : Error("outcome support must have at least 2 points, got " + std::to_string(n)) {}
};

struct SupportNotIncreasing : Error {
  explicit SupportNotIncreasing(std::size_t at)
      : Error("outcome support values must be strictly increasing (violated at index " +
              std::to_string(at) + ")") {}
};

struct NegativeProbability : Error {
  explicit NegativeProbability(const std::string& where)
      : Error("negative probability at " + where) {}
};

struct ArmNotNormalized : Error {
  ArmNotNormalized(std::size_t z, const std::string& sum)
      : Error("instrument arm z=" + std::to_string(z) + " has total mass " + sum +
              ", expected 1"),
        arm(z) {}
  std::size_t arm;
};

struct ShapeMismatch : Error {
  using Error::Error;
};

// ---- lp_core ---------------------------------------------------------------

struct DimensionTooLarge : Error {
  DimensionTooLarge(std::size_t cells, std::size_t cap)
      : Error("constraint matrix would have " + std::to_string(cells) +
              " rows, exceeding the cap of " + std::to_string(cap)) {}
};

struct Infeasible : Error {
  explicit Infeasible(std::size_t row)
      : Error("constraint row " + std::to_string(row) + " is violated"), row(row) {}
  std::size_t row;
};

struct ZeroVector : Error {
  ZeroVector() : Error("a ray must be a nonzero vector") {}
};

// ---- signatures / vertices -------------------------------------------------

struct NotAdmissible : Error {
  explicit NotAdmissible(const std::string& clause)
      : Error("signature is not admissible: " + clause), clause(clause) {}
  std::string clause;
};

struct NotAVertex : Error {
  NotAVertex() : Error("vector does not certify as a vertex of the dual polytope") {}
};

struct UnsupportedInstrumentArity : Error {
  explicit UnsupportedInstrumentArity(std::size_t ell)
      : Error("operation requires a binary instrument (ell=2), got ell=" +
              std::to_string(ell)) {}
};

// ---- oracle ----------------------------------------------------------------

struct DimensionMismatch : Error {
  using Error::Error;
};

struct InfeasibleLaw : Error {
  InfeasibleLaw() : Error("observed law is incompatible with the model: the primal polytope is empty") {}
};

struct OracleCapExceeded : Error {
  OracleCapExceeded(std::size_t vars, std::size_t cap)
      : Error("oracle instance has " + std::to_string(vars) +
              " primal variables, exceeding the cap of " + std::to_string(cap)) {}
};

struct SeparationFailed : Error {
  explicit SeparationFailed(const std::string& what) : Error("separation failed: " + what) {}
};

}  // namespace ivb
