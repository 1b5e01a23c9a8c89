#pragma once

#include <stdexcept>
#include <string>

namespace frik {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// The SO(3) logarithm is not unique when the rotation angle reaches pi.
class RotationNearPi : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class InvalidRotation : public Error {
public:
    using Error::Error;
};

class DegenerateProjection : public Error {
public:
    using Error::Error;
};

class OutOfLimits : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace frik
