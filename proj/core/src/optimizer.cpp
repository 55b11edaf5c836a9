#include "fringe/optimizer.hpp"

#include <cmath>

#include "fringe/error.hpp"

namespace fringe {

void AdamConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw ValidationError("learning rate must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ValidationError("adam epsilon must be > 0");
  if (!(weight_decay >= 0.0)) throw ValidationError("weight decay must be >= 0");
}

Adam::Adam(std::vector<Parameter*> params, AdamConfig config) : params_(std::move(params)), config_(config) {
  config_.validate();
  for (const auto* p : params_) {
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

void Adam::zero_grad() {
  for (auto* p : params_) p->grad.fill(0.0);
}

void Adam::step() {
  ++steps_;
  const double lr = config_.learning_rate;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Parameter& p = *params_[k];
    Tensor& m = m_[k];
    Tensor& v = v_[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i] + config_.weight_decay * p.value[i];
      m[i] = b1 * m[i] + (1.0 - b1) * g;
      v[i] = b2 * v[i] + (1.0 - b2) * g * g;
      p.value[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.epsilon);
    }
  }
}

std::map<std::string, Tensor> Adam::state() const {
  std::map<std::string, Tensor> out;
  for (std::size_t k = 0; k < params_.size(); ++k) {
    out.emplace("adam.m." + params_[k]->name, m_[k]);
    out.emplace("adam.v." + params_[k]->name, v_[k]);
  }
  return out;
}

void Adam::load_state(const std::map<std::string, Tensor>& tensors, std::uint64_t steps) {
  for (std::size_t k = 0; k < params_.size(); ++k) {
    const auto m = tensors.find("adam.m." + params_[k]->name);
    const auto v = tensors.find("adam.v." + params_[k]->name);
    if (m == tensors.end() || v == tensors.end()) {
      throw ValidationError("optimizer state missing for " + params_[k]->name);
    }
    if (m->second.shape() != m_[k].shape() || v->second.shape() != v_[k].shape()) {
      throw ValidationError("optimizer state shape mismatch for " + params_[k]->name);
    }
    m_[k] = m->second;
    v_[k] = v->second;
  }
  steps_ = steps;
}

}  // namespace fringe
