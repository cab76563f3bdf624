#pragma once

#include <stdexcept>
#include <string>

namespace gradex {

// configuration / schema / expression problems (CLI exit code 2)
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry problems: invalid domains, segments exiting the domain,
// under-resolved meshes (CLI exit code 3)
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// model-assumption violations: non-bracketable level sets, inadmissible
// boundary data without override, bad brackets (CLI exit code 3)
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gradex
