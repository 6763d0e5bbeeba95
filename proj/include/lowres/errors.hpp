#ifndef LOWRES_ERRORS_HPP
#define LOWRES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lowres {

// Exit-code mapping used by the CLI: ConfigError -> 2, DataError -> 3,
// NumericError -> 4.

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class DataErrorCode {
    FileNotFound,
    BadMagic,
    UnsupportedType,
    Truncated,
    MalformedToken,
    NonIncreasingIndex,
    IndexOutOfRange,
    BadArgument,
};

class DataError : public std::runtime_error {
public:
    DataError(DataErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    DataErrorCode code() const { return code_; }

private:
    DataErrorCode code_;
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lowres

#endif
