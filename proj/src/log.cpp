// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace parmor::log {

namespace {

Level g_level = Level::Error;
std::once_flag g_init;
std::mutex g_mutex;

void init_from_env()
{
  const char *env = std::getenv("PARMOR_LOG");
  if (!env)
  {
    return;
  }
  if (std::strcmp(env, "debug") == 0)
  {
    g_level = Level::Debug;
  }
  else if (std::strcmp(env, "info") == 0)
  {
    g_level = Level::Info;
  }
  else
  {
    g_level = Level::Error;
  }
}

void emit(const char *tag, const std::string &msg)
{
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "parmor %s: %s\n", tag, msg.c_str());
}

} // namespace

Level level()
{
  std::call_once(g_init, init_from_env);
  return g_level;
}

void set_level(Level lvl)
{
  std::call_once(g_init, init_from_env);
  g_level = lvl;
}

void error(const std::string &msg)
{
  if (level() >= Level::Error)
  {
    emit("error", msg);
  }
}

void info(const std::string &msg)
{
  if (level() >= Level::Info)
  {
    emit("info", msg);
  }
}

void debug(const std::string &msg)
{
  if (level() >= Level::Debug)
  {
    emit("debug", msg);
  }
}

} // namespace parmor::log
