#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace humanoid {

/// Library-wide logger ("humanoid"), writing to stderr at warn level by default.
spdlog::logger& logger();
void set_logger(std::shared_ptr<spdlog::logger> l);

}  // namespace humanoid
