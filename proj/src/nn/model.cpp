#include "modecast/nn/model.hpp"

#include <algorithm>

#include "modecast/errors.hpp"
#include "modecast/kernels/kernels.hpp"

namespace modecast::nn {

Variant variant_from_string(const std::string& s) {
  if (s == "lstm") return Variant::lstm;
  if (s == "vmd-lstm") return Variant::vmd_lstm;
  if (s == "vmd-cnn-lstm") return Variant::vmd_cnn_lstm;
  fail(ErrorKind::spec, "unknown model variant '" + s + "'");
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::lstm:
      return "lstm";
    case Variant::vmd_lstm:
      return "vmd-lstm";
    case Variant::vmd_cnn_lstm:
      return "vmd-cnn-lstm";
  }
  return "unknown";
}

Model::Model(Variant variant, std::size_t window_height, std::size_t seq_len,
             std::size_t num_kernels, std::size_t hidden, std::size_t layers)
    : variant_(variant), height_(window_height), seq_len_(seq_len), hidden_(hidden) {
  if (height_ < 1 || seq_len_ < 1 || hidden < 1 || layers < 1) {
    fail(ErrorKind::spec, "model: sizes must be positive");
  }
  if (variant_ == Variant::vmd_cnn_lstm) {
    if (num_kernels < 1) fail(ErrorKind::spec, "model: num_kernels must be positive");
    recon_.emplace(num_kernels, height_, seq_len_);
  }
  const std::size_t width = lstm_input_width();
  lstm_.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    lstm_.emplace_back(hidden, l == 0 ? width : hidden);
  }
  head_w_ = Tensor({hidden});
  head_b_ = Tensor({std::size_t{1}});
}

std::size_t Model::lstm_input_width() const {
  return height_ + (recon_ ? recon_->num_kernels : 0);
}

double Model::forward_impl(MatrixView window, bool record) {
  if (window.rows != height_ || window.cols != seq_len_) {
    fail(ErrorKind::shape,
         "model: window is " + std::to_string(window.rows) + "x" +
             std::to_string(window.cols) + ", expected " +
             std::to_string(height_) + "x" + std::to_string(seq_len_));
  }
  Matrix recon_pre;
  Matrix recon_out;
  if (recon_) {
    recon_out = reconstruction_forward(window, *recon_, record ? &recon_pre : nullptr);
  }

  const std::size_t width = lstm_input_width();
  std::vector<LstmState> states;
  states.reserve(lstm_.size());
  for (const auto& layer : lstm_) states.emplace_back(layer.hidden);

  if (record) {
    cache_.cells.assign(lstm_.size(), std::vector<LstmCellCache>(seq_len_));
  }

  std::vector<double> x(width);
  for (std::size_t t = 0; t < seq_len_; ++t) {
    for (std::size_t r = 0; r < height_; ++r) x[r] = window.at(r, t);
    if (recon_) {
      for (std::size_t j = 0; j < recon_->num_kernels; ++j) {
        x[height_ + j] = recon_out.at(j, t);
      }
    }
    std::span<const double> layer_in(x);
    for (std::size_t l = 0; l < lstm_.size(); ++l) {
      states[l] = lstm_cell_forward(layer_in, states[l], lstm_[l],
                                    record ? &cache_.cells[l][t] : nullptr);
      layer_in = states[l].h;
    }
  }

  const std::vector<double>& h_top = states.back().h;
  const double prediction =
      kernels::active().dot(head_w_.data.data(), h_top.data(), hidden_) +
      head_b_.data[0];

  if (record) {
    cache_.window = Matrix(window.rows, window.cols);
    std::copy(window.data, window.data + window.rows * window.cols,
              cache_.window.data.begin());
    cache_.recon_pre = std::move(recon_pre);
    cache_.recon_out = std::move(recon_out);
    cache_.h_top = h_top;
    cache_.valid = true;
  }
  return prediction;
}

double Model::predict(MatrixView window) { return forward_impl(window, true); }

double Model::predict_const(MatrixView window) const {
  return const_cast<Model*>(this)->forward_impl(window, false);
}

void Model::backward(double d_prediction) {
  if (!cache_.valid) {
    fail(ErrorKind::state, "model: backward called without a recorded forward pass");
  }
  ensure_grads();

  // head
  for (std::size_t j = 0; j < hidden_; ++j) {
    head_w_.grad[j] += d_prediction * cache_.h_top[j];
  }
  head_b_.grad[0] += d_prediction;

  std::vector<double> dh_top(hidden_);
  for (std::size_t j = 0; j < hidden_; ++j) {
    dh_top[j] = d_prediction * head_w_.data[j];
  }

  const std::size_t layers = lstm_.size();
  std::vector<std::vector<double>> dh_time(layers), dc_time(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    dh_time[l].assign(hidden_, 0.0);
    dc_time[l].assign(hidden_, 0.0);
  }

  Matrix d_recon(recon_ ? recon_->num_kernels : 0, recon_ ? seq_len_ : 0);
  for (std::size_t t = seq_len_; t-- > 0;) {
    std::vector<double> dx_above;
    for (std::size_t l = layers; l-- > 0;) {
      std::vector<double> dh = dh_time[l];
      if (l == layers - 1 && t == seq_len_ - 1) {
        for (std::size_t j = 0; j < hidden_; ++j) dh[j] += dh_top[j];
      }
      if (l < layers - 1) {
        for (std::size_t j = 0; j < hidden_; ++j) dh[j] += dx_above[j];
      }
      LstmCellGrads grads =
          lstm_cell_backward(lstm_[l], cache_.cells[l][t], dh, dc_time[l]);
      dh_time[l] = std::move(grads.dh_prev);
      dc_time[l] = std::move(grads.dc_prev);
      dx_above = std::move(grads.dx);
    }
    if (recon_) {
      for (std::size_t j = 0; j < recon_->num_kernels; ++j) {
        d_recon.at(j, t) = dx_above[height_ + j];
      }
    }
    // gradients w.r.t. the decomposed rows themselves are discarded
  }

  if (recon_) {
    reconstruction_backward(*recon_, cache_.window, cache_.recon_pre, d_recon);
  }
}

std::vector<Tensor*> Model::parameters() {
  std::vector<Tensor*> out;
  for (auto& [name, t] : named_parameters()) out.push_back(t);
  return out;
}

std::vector<std::pair<std::string, Tensor*>> Model::named_parameters() {
  std::vector<std::pair<std::string, Tensor*>> out;
  if (recon_) {
    out.emplace_back("recon.weights", &recon_->weights);
    out.emplace_back("recon.bias", &recon_->bias);
  }
  for (std::size_t l = 0; l < lstm_.size(); ++l) {
    const std::string p = "lstm" + std::to_string(l) + ".";
    out.emplace_back(p + "w_forget", &lstm_[l].w_forget);
    out.emplace_back(p + "w_input", &lstm_[l].w_input);
    out.emplace_back(p + "w_output", &lstm_[l].w_output);
    out.emplace_back(p + "w_cell", &lstm_[l].w_cell);
    out.emplace_back(p + "b_forget", &lstm_[l].b_forget);
    out.emplace_back(p + "b_input", &lstm_[l].b_input);
    out.emplace_back(p + "b_output", &lstm_[l].b_output);
    out.emplace_back(p + "b_cell", &lstm_[l].b_cell);
  }
  out.emplace_back("head.weight", &head_w_);
  out.emplace_back("head.bias", &head_b_);
  return out;
}

void Model::ensure_grads() {
  for (Tensor* t : parameters()) t->ensure_grad();
}

void Model::zero_grads() {
  for (Tensor* t : parameters()) t->zero_grad();
}

std::size_t Model::parameter_count() {
  std::size_t n = 0;
  for (Tensor* t : parameters()) n += t->size();
  return n;
}

}  // namespace modecast::nn
