#pragma once

#include <array>
#include <string>

namespace byos::testing {

/// Five wordings of the same Redis tuning request.
inline const std::array<std::string, 5> kRedisObjectives = {
    "Make Redis respond faster on this machine",
    "Tune the kernel so that Redis serves more requests per second",
    "I need lower latency for my Redis cache server",
    "Adjust operating system settings to speed up Redis",
    "Boost the throughput and responsiveness of a Redis deployment",
};

}  // namespace byos::testing
