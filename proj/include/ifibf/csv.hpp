#pragma once

#include <cstdio>
#include <string>

namespace ifibf {

// Numbers in every CSV the tools emit: 6 significant digits, '.' decimal
// separator regardless of locale.
inline std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace ifibf
