#pragma once

#include <stdexcept>
#include <string>

namespace tvcn {

// Base class for all domain errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DuplicateNode : Error {
  using Error::Error;
};
struct UnknownNode : Error {
  using Error::Error;
};
struct SelfLoop : Error {
  using Error::Error;
};
struct DuplicateEdge : Error {
  using Error::Error;
};
struct UnknownEdge : Error {
  using Error::Error;
};

struct EmptyGraph : Error {
  using Error::Error;
};
struct IsolatedNode : Error {
  using Error::Error;
};
struct DegenerateDistribution : Error {
  using Error::Error;
};
struct ZeroDenominator : Error {
  using Error::Error;
};
struct BudgetInfeasible : Error {
  using Error::Error;
};
struct InvalidConfig : Error {
  using Error::Error;
};

struct TooSmall : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct UndefinedThreshold : Error {
  using Error::Error;
};

struct Unreachable : Error {
  using Error::Error;
};
struct PathExplosion : Error {
  using Error::Error;
};

struct InvalidRoute : Error {
  using Error::Error;
};
struct NonPositiveRate : Error {
  using Error::Error;
};
struct ZeroCapacity : Error {
  using Error::Error;
};
struct EmptySubnetwork : Error {
  using Error::Error;
};

}  // namespace tvcn
