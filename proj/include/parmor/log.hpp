// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_LOG_HPP
#define PARMOR_LOG_HPP

#include <string>

namespace parmor::log {

enum class Level
{
  Error = 0,
  Info = 1,
  Debug = 2
};

// Current level; initialized from the PARMOR_LOG environment variable
// (error|info|debug, default error) on first use.
Level level();
void set_level(Level lvl);

// Messages go to stderr so stdout stays clean for piped artifacts.
void error(const std::string &msg);
void info(const std::string &msg);
void debug(const std::string &msg);

} // namespace parmor::log

#endif // PARMOR_LOG_HPP
