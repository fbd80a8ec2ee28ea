#pragma once

#include <memory>

#include "polaron/config.hpp"
#include "polaron/phonon_kernel.hpp"

namespace polaron::testing {

/// Kernel for the reference bath, tabulated once per test binary.
inline std::shared_ptr<const PhononBath> reference_bath() {
  static const auto bath =
      std::make_shared<const PhononBath>(tabulate_kernel(reference_config().bath));
  return bath;
}

inline std::shared_ptr<const PhononBath> free_bath() {
  BathParams p = reference_config().bath;
  p.alpha_p = 0.0;
  static const auto bath = std::make_shared<const PhononBath>(tabulate_kernel(p));
  return bath;
}

inline SimulationConfig without_phonons(SimulationConfig cfg) {
  cfg.bath.alpha_p = 0.0;
  return cfg;
}

}  // namespace polaron::testing
