#include "modecast/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "modecast/errors.hpp"
#include "modecast/kernels/kernels.hpp"

namespace modecast::nn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void gate_forward(const Tensor& w, const Tensor& b,
                  std::span<const double> concat, std::size_t hidden,
                  std::size_t width, std::vector<double>& out, bool use_tanh) {
  out.resize(hidden);
  kernels::active().affine(w.data.data(), concat.data(), b.data.data(),
                           out.data(), hidden, width);
  if (use_tanh) {
    for (double& v : out) v = std::tanh(v);
  } else {
    for (double& v : out) v = sigmoid(v);
  }
}

}  // namespace

LstmLayerParams::LstmLayerParams(std::size_t hidden_size, std::size_t input_size)
    : hidden(hidden_size),
      input(input_size),
      w_forget({hidden_size, hidden_size + input_size}),
      w_input({hidden_size, hidden_size + input_size}),
      w_output({hidden_size, hidden_size + input_size}),
      w_cell({hidden_size, hidden_size + input_size}),
      b_forget({hidden_size}),
      b_input({hidden_size}),
      b_output({hidden_size}),
      b_cell({hidden_size}) {}

LstmState lstm_cell_forward(std::span<const double> x, const LstmState& prev,
                            const LstmLayerParams& params,
                            LstmCellCache* cache) {
  const std::size_t hidden = params.hidden;
  if (x.size() != params.input || prev.h.size() != hidden ||
      prev.c.size() != hidden) {
    fail(ErrorKind::shape, "lstm: input/state sizes do not match the layer");
  }
  const std::size_t width = hidden + params.input;

  std::vector<double> concat(width);
  std::copy(prev.h.begin(), prev.h.end(), concat.begin());
  std::copy(x.begin(), x.end(), concat.begin() + static_cast<std::ptrdiff_t>(hidden));

  std::vector<double> f, i, o, g;
  gate_forward(params.w_forget, params.b_forget, concat, hidden, width, f, false);
  gate_forward(params.w_input, params.b_input, concat, hidden, width, i, false);
  gate_forward(params.w_output, params.b_output, concat, hidden, width, o, false);
  gate_forward(params.w_cell, params.b_cell, concat, hidden, width, g, true);

  LstmState next(hidden);
  std::vector<double> tanh_c(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    next.c[j] = f[j] * prev.c[j] + i[j] * g[j];
    tanh_c[j] = std::tanh(next.c[j]);
    next.h[j] = o[j] * tanh_c[j];
  }

  if (cache != nullptr) {
    cache->concat = std::move(concat);
    cache->prev_c = prev.c;
    cache->f = std::move(f);
    cache->i = std::move(i);
    cache->o = std::move(o);
    cache->g = std::move(g);
    cache->c = next.c;
    cache->tanh_c = std::move(tanh_c);
  }
  return next;
}

LstmCellGrads lstm_cell_backward(LstmLayerParams& params,
                                 const LstmCellCache& cache,
                                 std::span<const double> dh,
                                 std::span<const double> dc) {
  const auto& k = kernels::active();
  const std::size_t hidden = params.hidden;
  const std::size_t width = hidden + params.input;

  std::vector<double> dz_f(hidden), dz_i(hidden), dz_o(hidden), dz_g(hidden);
  LstmCellGrads out;
  out.dc_prev.resize(hidden);

  for (std::size_t j = 0; j < hidden; ++j) {
    const double tv = cache.tanh_c[j];
    const double d_out_gate = dh[j] * tv;
    const double dct = dc[j] + dh[j] * cache.o[j] * (1.0 - tv * tv);
    dz_o[j] = d_out_gate * cache.o[j] * (1.0 - cache.o[j]);
    dz_f[j] = dct * cache.prev_c[j] * cache.f[j] * (1.0 - cache.f[j]);
    dz_i[j] = dct * cache.g[j] * cache.i[j] * (1.0 - cache.i[j]);
    dz_g[j] = dct * cache.i[j] * (1.0 - cache.g[j] * cache.g[j]);
    out.dc_prev[j] = dct * cache.f[j];
  }

  std::vector<double> d_concat(width, 0.0);
  k.matvec_transpose_acc(params.w_forget.data.data(), dz_f.data(),
                         d_concat.data(), hidden, width);
  k.matvec_transpose_acc(params.w_input.data.data(), dz_i.data(),
                         d_concat.data(), hidden, width);
  k.matvec_transpose_acc(params.w_output.data.data(), dz_o.data(),
                         d_concat.data(), hidden, width);
  k.matvec_transpose_acc(params.w_cell.data.data(), dz_g.data(),
                         d_concat.data(), hidden, width);

  k.outer_product_acc(dz_f.data(), cache.concat.data(),
                      params.w_forget.grad.data(), hidden, width);
  k.outer_product_acc(dz_i.data(), cache.concat.data(),
                      params.w_input.grad.data(), hidden, width);
  k.outer_product_acc(dz_o.data(), cache.concat.data(),
                      params.w_output.grad.data(), hidden, width);
  k.outer_product_acc(dz_g.data(), cache.concat.data(),
                      params.w_cell.grad.data(), hidden, width);
  for (std::size_t j = 0; j < hidden; ++j) {
    params.b_forget.grad[j] += dz_f[j];
    params.b_input.grad[j] += dz_i[j];
    params.b_output.grad[j] += dz_o[j];
    params.b_cell.grad[j] += dz_g[j];
  }

  out.dh_prev.assign(d_concat.begin(),
                     d_concat.begin() + static_cast<std::ptrdiff_t>(hidden));
  out.dx.assign(d_concat.begin() + static_cast<std::ptrdiff_t>(hidden),
                d_concat.end());
  return out;
}

ReconstructionLayer::ReconstructionLayer(std::size_t n_k, std::size_t height,
                                         std::size_t width)
    : num_kernels(n_k),
      kernel_height(height),
      kernel_width(width),
      weights({n_k, height, width}),
      bias({n_k}) {}

namespace {

// K x (L + w - 1) copy of the window with zero time-padding, left pad w/2.
Matrix pad_window(MatrixView window, std::size_t width) {
  const std::size_t left = width / 2;
  Matrix padded(window.rows, window.cols + width - 1);
  for (std::size_t r = 0; r < window.rows; ++r) {
    for (std::size_t c = 0; c < window.cols; ++c) {
      padded.at(r, left + c) = window.at(r, c);
    }
  }
  return padded;
}

}  // namespace

Matrix reconstruction_forward(MatrixView window,
                              const ReconstructionLayer& layer,
                              Matrix* pre_activation) {
  if (window.rows != layer.kernel_height) {
    fail(ErrorKind::shape, "reconstruction: window height " +
                               std::to_string(window.rows) +
                               " does not match kernel height " +
                               std::to_string(layer.kernel_height));
  }
  const auto& k = kernels::active();
  const std::size_t length = window.cols;
  const std::size_t w = layer.kernel_width;
  const Matrix padded = pad_window(window, w);

  Matrix out(layer.num_kernels, length);
  if (pre_activation != nullptr) *pre_activation = Matrix(layer.num_kernels, length);
  for (std::size_t j = 0; j < layer.num_kernels; ++j) {
    const double* wj = layer.weights.data.data() + j * layer.kernel_height * w;
    for (std::size_t t = 0; t < length; ++t) {
      double acc = layer.bias.data[j];
      for (std::size_t r = 0; r < layer.kernel_height; ++r) {
        acc += k.dot(wj + r * w, padded.data.data() + r * padded.cols + t, w);
      }
      if (pre_activation != nullptr) pre_activation->at(j, t) = acc;
      out.at(j, t) = std::max(0.0, acc);
    }
  }
  return out;
}

void reconstruction_backward(ReconstructionLayer& layer, MatrixView window,
                             const Matrix& pre_activation, const Matrix& d_out) {
  const auto& k = kernels::active();
  const std::size_t length = window.cols;
  const std::size_t w = layer.kernel_width;
  const Matrix padded = pad_window(window, w);

  std::vector<double> d_pre(length);
  for (std::size_t j = 0; j < layer.num_kernels; ++j) {
    double db = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      d_pre[t] = pre_activation.at(j, t) > 0.0 ? d_out.at(j, t) : 0.0;
      db += d_pre[t];
    }
    layer.bias.grad[j] += db;
    double* dwj = layer.weights.grad.data() + j * layer.kernel_height * w;
    for (std::size_t r = 0; r < layer.kernel_height; ++r) {
      const double* prow = padded.data.data() + r * padded.cols;
      for (std::size_t tap = 0; tap < w; ++tap) {
        dwj[r * w + tap] += k.dot(d_pre.data(), prow + tap, length);
      }
    }
  }
}

}  // namespace modecast::nn
