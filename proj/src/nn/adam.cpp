#include "modecast/nn/adam.hpp"

#include <cmath>

#include "modecast/errors.hpp"
#include "modecast/kernels/kernels.hpp"

namespace modecast::nn {

Adam::Adam(std::vector<Tensor*> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (Tensor* p : params_) {
    p->ensure_grad();
    m_.emplace_back(p->size(), 0.0);
    v_.emplace_back(p->size(), 0.0);
  }
}

void Adam::step(double lr) {
  if (lr < 0.0) fail(ErrorKind::spec, "adam: negative learning rate");
  for (const Tensor* p : params_) {
    for (double g : p->grad) {
      if (!std::isfinite(g)) {
        fail(ErrorKind::training_diverged, "adam: non-finite gradient");
      }
    }
  }
  ++t_;
  const double inv_bc1 =
      1.0 / (1.0 - std::pow(config_.beta1, static_cast<double>(t_)));
  const double inv_bc2 =
      1.0 / (1.0 - std::pow(config_.beta2, static_cast<double>(t_)));
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Tensor* p = params_[i];
    k.adam_update(p->data.data(), p->grad.data(), m_[i].data(), v_[i].data(),
                  p->size(), config_.beta1, config_.beta2, inv_bc1, inv_bc2,
                  lr, config_.epsilon);
  }
}

}  // namespace modecast::nn
