#include "humanoid/log.hpp"

#include <mutex>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace humanoid {

namespace {

std::mutex g_mu;
std::shared_ptr<spdlog::logger> g_logger;

}  // namespace

spdlog::logger& logger() {
  std::lock_guard lock(g_mu);
  if (!g_logger) {
    g_logger = std::make_shared<spdlog::logger>(
        "humanoid", std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
    g_logger->set_level(spdlog::level::warn);
    g_logger->set_pattern("[%l] %v");
  }
  return *g_logger;
}

void set_logger(std::shared_ptr<spdlog::logger> l) {
  std::lock_guard lock(g_mu);
  g_logger = std::move(l);
}

}  // namespace humanoid
