#pragma once

#include <stdexcept>
#include <string>

namespace eccar {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidData : Error {
  using Error::Error;
};
struct InvalidDimensions : Error {
  using Error::Error;
};
struct InvalidPartition : Error {
  using Error::Error;
};
struct InvalidConfig : Error {
  using Error::Error;
};
struct RankTooLarge : Error {
  using Error::Error;
};
struct RankDeficient : Error {
  using Error::Error;
};
struct DegenerateSolution : Error {
  using Error::Error;
};
struct SingularCovariance : Error {
  using Error::Error;
};
struct NumericalFailure : Error {
  using Error::Error;
};
struct InvalidModel : Error {
  using Error::Error;
};
struct NoViableModel : Error {
  using Error::Error;
};
struct InvalidSignal : Error {
  using Error::Error;
};

}  // namespace eccar
