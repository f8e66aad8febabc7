#pragma once

#include <functional>
#include <iostream>
#include <string>
#include <utility>

namespace aspectseed {

using WarningHandler = std::function<void(const std::string&)>;

inline WarningHandler& warning_handler() {
  static WarningHandler handler = [](const std::string& msg) {
    std::cerr << "warning: " << msg << "\n";
  };
  return handler;
}

inline void set_warning_handler(WarningHandler handler) {
  warning_handler() = std::move(handler);
}

inline void warn(const std::string& msg) { warning_handler()(msg); }

}  // namespace aspectseed
