#pragma once

namespace crowdsent {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace crowdsent
