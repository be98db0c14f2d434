#pragma once

namespace sweep::log {

enum class Level { off = 0, info = 1, debug = 2 };

/// Current verbosity, read once from the SWEEP_LOG environment variable
/// (off | info | debug; default off).
Level level();

void emit(Level at, const char* fmt, ...) __attribute__((format(printf, 2, 3)));

}  // namespace sweep::log

#define SWEEP_INFO(...) ::sweep::log::emit(::sweep::log::Level::info, __VA_ARGS__)
#define SWEEP_DEBUG(...) ::sweep::log::emit(::sweep::log::Level::debug, __VA_ARGS__)
