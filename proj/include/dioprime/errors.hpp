#pragma once

#include <stdexcept>
#include <string>

namespace dioprime {

/// Library error. `code()` is a stable machine-readable tag that sweeps and
/// reports carry verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* kInvalidArgument = "invalid_argument";
inline constexpr const char* kRationalAlpha = "rational_alpha";
inline constexpr const char* kParse = "parse_error";
inline constexpr const char* kCeiling = "ceiling_exceeded";
inline constexpr const char* kOutOfRange = "out_of_range";
inline constexpr const char* kDepthCap = "depth_cap";
inline constexpr const char* kOverflow = "overflow";
inline constexpr const char* kWorkload = "workload_exceeded";
inline constexpr const char* kWindowNotFound = "window_not_found";
inline constexpr const char* kConfig = "config_error";
}  // namespace errc

[[noreturn]] inline void fail(const char* code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dioprime
