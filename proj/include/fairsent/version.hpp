#pragma once

namespace fairsent {

inline constexpr const char* kVersion = "0.1.0";

}
