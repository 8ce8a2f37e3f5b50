#pragma once

namespace orbicat {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace orbicat
