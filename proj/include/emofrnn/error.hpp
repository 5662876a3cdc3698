#pragma once

#include <stdexcept>
#include <string>

namespace emofrnn {

/// Malformed or inconsistent input data (task files, vector files, datasets).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration or command-line usage.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace emofrnn
