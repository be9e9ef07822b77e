#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace annulus::log {

using WarningHandler = std::function<void(std::string_view)>;

/// Emits a warning through the installed handler (stderr by default). Thread-safe.
void warn(std::string_view message);

/// Installs a new handler and returns the previous one. Passing an empty
/// function restores the default stderr handler.
WarningHandler set_warning_handler(WarningHandler handler);

/// Captures warnings for the lifetime of the object; restores the previous handler on exit.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::vector<std::string>& messages() const noexcept { return messages_; }
  bool contains(std::string_view needle) const;

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace annulus::log
