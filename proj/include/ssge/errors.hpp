#pragma once

#include <stdexcept>
#include <string>

namespace ssge {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// More than half of the pairwise sample distances are zero; the median
// heuristic would produce a degenerate bandwidth.
class DegenerateSamples : public Error {
public:
  using Error::Error;
};

class EigensolverFailure : public Error {
public:
  using Error::Error;
};

// Requested a spectral basis from a matrix whose leading eigenvalue is <= 0.
class AllZeroSpectrum : public Error {
public:
  using Error::Error;
};

class InvalidRank : public Error {
public:
  using Error::Error;
};

class SingularSystem : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace ssge
