#pragma once

#include <stdexcept>
#include <string>

namespace bandrmt {

// thrown when an enumeration or size cap is exceeded (CLI exit 2)
struct cap_error : std::runtime_error {
  explicit cap_error(const std::string& m) : std::runtime_error(m) {}
};

// thrown when a work/node budget blows up (CLI exit 3)
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& m) : std::runtime_error(m) {}
};

// eigensolver / linear-algebra backend failure (CLI exit 4)
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& m) : std::runtime_error(m) {}
};

// fixed-point iteration failed to reach tolerance (CLI exit 5)
struct convergence_error : std::runtime_error {
  explicit convergence_error(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace bandrmt
