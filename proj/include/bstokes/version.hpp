#pragma once

namespace bstokes {
inline constexpr const char* kVersion = "biotstokes-0.1.0";
}
