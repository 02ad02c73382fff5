// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <string>

namespace streamsim {

// Locale-independent float formatting; CSV output must be byte-stable.
inline std::string format_g(double v, int significant = 9) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
  return buf;
}

// Milliseconds, 6 significant digits: the reporting convention for times.
inline std::string format_ms(double seconds) {
  return format_g(seconds * 1e3, 6);
}

}  // namespace streamsim
