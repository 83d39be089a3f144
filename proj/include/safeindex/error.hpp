#pragma once

#include <stdexcept>
#include <string>

namespace safeindex {

// Recoverable data/configuration failures. The CLI maps these to exit code 1;
// anything else escaping a command is treated as an internal fault.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LexiconError : public Error {
public:
    using Error::Error;
};

class UrlError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

} // namespace safeindex
