#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace commflow {

enum class PartyId { kAlice, kBob, kCoordinator };

inline const char* party_name(PartyId p) {
  switch (p) {
    case PartyId::kAlice: return "alice";
    case PartyId::kBob: return "bob";
    case PartyId::kCoordinator: return "coordinator";
  }
  return "?";
}

// Which party holds each row of a distributed matrix. Coordinator never owns
// rows (it has no input data).
struct RowPartition {
  std::vector<PartyId> owner;

  int size() const { return static_cast<int>(owner.size()); }
  void validate() const {
    for (PartyId p : owner) {
      if (p == PartyId::kCoordinator)
        throw std::invalid_argument("rows must be owned by alice or bob");
    }
  }
  static RowPartition all(PartyId p, int m) {
    return RowPartition{std::vector<PartyId>(static_cast<size_t>(m), p)};
  }
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FixedPointOverflow : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  double rcond_estimate;
  SingularMatrixError(const std::string& msg, double rcond)
      : Error(msg), rcond_estimate(rcond) {}
};

struct LewisNonConvergence : Error {
  double residual;
  LewisNonConvergence(const std::string& msg, double res)
      : Error(msg), residual(res) {}
};

struct SketchRetryError : Error {
  using Error::Error;
};

struct BarrierDomainError : Error {
  using Error::Error;
};

struct DegenerateBoxError : Error {
  using Error::Error;
};

struct StepTooLargeError : Error {
  using Error::Error;
};

struct RetryExhaustedError : Error {
  using Error::Error;
};

struct DimensionGuardError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

inline int ceil_log2(std::int64_t x) {
  if (x <= 1) return 0;
  int b = 0;
  std::int64_t v = 1;
  while (v < x) {
    v <<= 1;
    ++b;
  }
  return b;
}

}  // namespace commflow
