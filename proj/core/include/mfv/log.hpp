// Minimal stderr logger controlled by the MFV_LOG environment variable
// (error|warn|info|debug, default warn).

#ifndef MFV_LOG_HPP
#define MFV_LOG_HPP

#include <cstdio>
#include <string>

namespace mfv::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level threshold();

bool enabled(Level level);

void write(Level level, const std::string& message);

inline void error(const std::string& m) { write(Level::Error, m); }
inline void warn(const std::string& m) { write(Level::Warn, m); }
inline void info(const std::string& m) { write(Level::Info, m); }
inline void debug(const std::string& m) { write(Level::Debug, m); }

}  // namespace mfv::log

#endif
