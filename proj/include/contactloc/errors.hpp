#ifndef CONTACTLOC_ERRORS_HPP
#define CONTACTLOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace contactloc {

/// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scenario or policy document failed validation. `key_path()` names the
/// offending location in JSON-pointer-ish dotted form, e.g. `$.grid.width`.
class ConfigError : public Error {
public:
    ConfigError(std::string key_path, const std::string& what)
        : Error(key_path + ": " + what), key_path_(std::move(key_path)) {}

    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

/// Policy or database document could not be decoded.
class FormatError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// No hypothesis explains the observations (or the groundtruth is not in the
/// initial set). The localization task cannot be completed.
class UnrealizableTask : public Error {
public:
    using Error::Error;
};

/// Two hypotheses produce identical occupancy everywhere, so no action can
/// ever tell them apart and the goal set is unreachable.
class IndistinguishableHypotheses : public Error {
public:
    using Error::Error;
};

/// Greedy policy extraction revisited a belief or ran past the depth cap.
class GreedyCycle : public Error {
public:
    using Error::Error;
};

/// The robot was found inside an occupied cell; internal state is corrupt.
class CorruptedState : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace contactloc

#endif  // CONTACTLOC_ERRORS_HPP
