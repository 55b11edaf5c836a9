#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fringe/layers.hpp"

namespace fringe {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;

  void validate() const;
};

/// Adam over a fixed parameter group. Parameters outside the group are never
/// touched, which is how frozen layers stay bit-identical.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamConfig config);

  void zero_grad();
  void step();

  const AdamConfig& config() const { return config_; }
  std::uint64_t steps_taken() const { return steps_; }

  /// Moment tensors keyed "adam.m.<param>" / "adam.v.<param>", for checkpoints.
  std::map<std::string, Tensor> state() const;
  void load_state(const std::map<std::string, Tensor>& tensors, std::uint64_t steps);

 private:
  std::vector<Parameter*> params_;
  std::vector<Tensor> m_, v_;
  AdamConfig config_;
  std::uint64_t steps_ = 0;
};

}  // namespace fringe
