#pragma once

#include <stdexcept>
#include <string>

namespace hawkes {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidKernel : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct Unstable : Error { using Error::Error; };
struct StepTooCoarse : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct HorizonTooShort : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct IntensityBlowup : Error { using Error::Error; };
struct BadReference : Error { using Error::Error; };
struct NotStandardForm : Error { using Error::Error; };
struct ConditionViolated : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace hawkes
