#include "annulus/log.hpp"

#include <iostream>
#include <mutex>

namespace annulus::log {
namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

void default_handler(std::string_view message) { std::cerr << "warning: " << message << '\n'; }

WarningHandler& current_handler() {
  static WarningHandler handler = default_handler;
  return handler;
}

}  // namespace

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  current_handler()(message);
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex());
  if (!handler) handler = default_handler;
  std::swap(current_handler(), handler);
  return handler;
}

ScopedWarningCapture::ScopedWarningCapture()
    : previous_(set_warning_handler([this](std::string_view m) { messages_.emplace_back(m); })) {}

ScopedWarningCapture::~ScopedWarningCapture() { set_warning_handler(std::move(previous_)); }

bool ScopedWarningCapture::contains(std::string_view needle) const {
  for (const auto& m : messages_) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace annulus::log
