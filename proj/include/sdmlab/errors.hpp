#pragma once

#include <stdexcept>
#include <string>

namespace sdmlab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument (negative sizes, ragged banks, mismatched edge counts...).
class ArgumentError : public Error
{
public:
    using Error::Error;
};

/// Loop-filter order that has no D(z) = 1 realization.
class UnsupportedOrderError : public Error
{
public:
    using Error::Error;
};

/// The modulator state left the finite range, i.e. the loop diverged.
class NumericStateError : public Error
{
public:
    using Error::Error;
};

/// Invalid simulation configuration (jitter too large, f_x outside band...).
class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace sdmlab
