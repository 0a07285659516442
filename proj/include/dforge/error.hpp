#pragma once

#include <stdexcept>
#include <string>

namespace dforge {

enum class ErrorCode {
  kInvalidInput,
  kDimensionMismatch,
  kHyperplane,       // a Lorentz vector with <v,w> = 0 has no finite center
  kOutsideDomain,
  kRankDeficient,
  kInfeasible,       // admissibility of ODE/initial data violated
  kSingular,         // transform or tangency system degenerates
  kDrift,            // first integral could not be held within tolerance
  kDegenerate,
  kVerification,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dforge
