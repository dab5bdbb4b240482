#pragma once

namespace hopcycle {
inline constexpr const char* kVersion = "0.1.0";
}
