// errors.hpp: exception types shared by all cmat modules

#pragma once

#include <stdexcept>
#include <string>

namespace cmat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

// Both pulses vanish, so the dark state is undefined.
struct DegenerateState : Error {
    using Error::Error;
};

// All couplings vanish; no eigenbasis can be singled out.
struct DegenerateSpectrum : Error {
    using Error::Error;
};

struct UndefinedCooperativity : Error {
    using Error::Error;
};

// The dark/bright gap |omega_{+-1}| is zero.
struct SingularGap : Error {
    using Error::Error;
};

struct IntegrationFailure : Error {
    IntegrationFailure(const std::string& what, double last_good_t)
        : Error(what), last_t(last_good_t) {}
    double last_t;
};

struct ConfigError : Error {
    ConfigError(std::string path, const std::string& what)
        : Error(path + ": " + what), field_path(std::move(path)) {}
    std::string field_path;
};

} // namespace cmat
