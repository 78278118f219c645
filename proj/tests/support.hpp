#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <span>
#include <string>

#include "wavesense/scattering.hpp"

namespace testsupport {

inline std::filesystem::path source_dir() {
  if (const char* env = std::getenv("WAVESENSE_SOURCE_DIR")) return env;
  return std::filesystem::path(__FILE__).parent_path().parent_path();
}

inline double max_abs_diff(std::span<const std::complex<double>> a,
                           std::span<const std::complex<double>> b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

inline double max_abs(std::span<const std::complex<double>> a) {
  double e = 0.0;
  for (const auto& v : a) e = std::max(e, std::abs(v));
  return e;
}

/// Fresh scratch directory under the test binary's working directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::current_path() / ("scratch_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
