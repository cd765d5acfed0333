// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <stdexcept>

namespace ibp {

struct GammaPrior {
  double shape = 1.0;
  double rate = 1.0;
  bool operator==(const GammaPrior&) const = default;
};

struct ResampleFlags {
  bool alpha = true;
  bool sigma_x = false;
  bool sigma_a = false;
  bool operator==(const ResampleFlags&) const = default;
};

/// Model hyperparameters plus the knobs controlling their resampling.
struct HyperParams {
  double alpha = 1.0;
  double sigma_x = 0.5;
  double sigma_a = 1.0;
  GammaPrior alpha_prior;
  double variance_step = 0.1;
  ResampleFlags resample;

  void validate() const {
    if (alpha <= 0.0) throw std::invalid_argument("HyperParams: alpha must be > 0");
    if (sigma_x <= 0.0) throw std::invalid_argument("HyperParams: sigma_x must be > 0");
    if (sigma_a <= 0.0) throw std::invalid_argument("HyperParams: sigma_a must be > 0");
    if (variance_step <= 0.0) throw std::invalid_argument("HyperParams: variance_step must be > 0");
    if (alpha_prior.shape <= 0.0 || alpha_prior.rate <= 0.0) {
      throw std::invalid_argument("HyperParams: alpha prior must have positive shape and rate");
    }
  }

  bool operator==(const HyperParams&) const = default;
};

}  // namespace ibp
