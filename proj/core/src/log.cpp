#include "sweep/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace sweep::log {

Level level() {
  static const Level cached = [] {
    const char* env = std::getenv("SWEEP_LOG");
    if (env == nullptr) return Level::off;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    if (std::strcmp(env, "info") == 0) return Level::info;
    return Level::off;
  }();
  return cached;
}

void emit(Level at, const char* fmt, ...) {
  if (static_cast<int>(at) > static_cast<int>(level())) return;
  std::fputs(at == Level::debug ? "[sweep:debug] " : "[sweep] ", stderr);
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

}  // namespace sweep::log
