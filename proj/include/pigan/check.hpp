#pragma once

#include <stdexcept>
#include <string>

namespace pigan {

[[noreturn]] inline void fail_check(const char* expr, const char* file, int line,
                                    const std::string& msg) {
  throw std::logic_error(std::string(file) + ":" + std::to_string(line) +
                         ": check failed (" + expr + "): " + msg);
}

}  // namespace pigan

#define PIGAN_CHECK(cond, msg)                               \
  do {                                                       \
    if (!(cond)) ::pigan::fail_check(#cond, __FILE__, __LINE__, (msg)); \
  } while (0)
