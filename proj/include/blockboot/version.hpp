#pragma once

namespace blockboot {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace blockboot
