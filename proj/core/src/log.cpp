#include "mfv/log.hpp"

#include <cstdlib>
#include <cstring>

namespace mfv::log {

Level threshold() {
  static Level cached = [] {
    const char* env = std::getenv("MFV_LOG");
    if (env == nullptr) return Level::Warn;
    if (std::strcmp(env, "error") == 0) return Level::Error;
    if (std::strcmp(env, "warn") == 0) return Level::Warn;
    if (std::strcmp(env, "info") == 0) return Level::Info;
    if (std::strcmp(env, "debug") == 0) return Level::Debug;
    return Level::Warn;
  }();
  return cached;
}

bool enabled(Level level) { return static_cast<int>(level) <= static_cast<int>(threshold()); }

void write(Level level, const std::string& message) {
  if (!enabled(level)) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "[mfv %s] %s\n", names[static_cast<int>(level)], message.c_str());
}

}  // namespace mfv::log
