#pragma once

#include <stdexcept>
#include <string>

namespace anchored {

/// Invalid argument or malformed input (CLI exit code 2).
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure such as a factorization breakdown (CLI exit code 3).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Request exceeds a hard capability limit, e.g. 2^d enumeration for large d
/// (CLI exit code 4).
class capability_error : public std::runtime_error {
 public:
  explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCapability = 4;

}  // namespace anchored
