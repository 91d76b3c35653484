#pragma once

namespace ivsfun {
inline constexpr const char* kVersion = "0.1.0";
}
