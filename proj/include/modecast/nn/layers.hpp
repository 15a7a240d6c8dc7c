#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "modecast/matrix.hpp"
#include "modecast/nn/tensor.hpp"

namespace modecast::nn {

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;

  LstmState() = default;
  explicit LstmState(std::size_t hidden) : h(hidden, 0.0), c(hidden, 0.0) {}
};

/// One LSTM layer. Gate matrices act on the concatenation [h_{t-1}; x_t],
/// so each weight tensor is hidden x (hidden + input).
struct LstmLayerParams {
  std::size_t hidden = 0;
  std::size_t input = 0;
  Tensor w_forget, w_input, w_output, w_cell;
  Tensor b_forget, b_input, b_output, b_cell;

  LstmLayerParams() = default;
  LstmLayerParams(std::size_t hidden_size, std::size_t input_size);
};

/// Values recorded by one forward step, consumed by backpropagation
/// through time.
struct LstmCellCache {
  std::vector<double> concat;  // [h_prev; x]
  std::vector<double> prev_c;
  std::vector<double> f, i, o, g;  // gate activations; g is the tanh candidate
  std::vector<double> c, tanh_c;
};

LstmState lstm_cell_forward(std::span<const double> x, const LstmState& prev,
                            const LstmLayerParams& params,
                            LstmCellCache* cache = nullptr);

struct LstmCellGrads {
  std::vector<double> dx;
  std::vector<double> dh_prev;
  std::vector<double> dc_prev;
};

/// Accumulates parameter gradients into params.*.grad (which must be
/// allocated) and returns the gradients flowing into the inputs.
LstmCellGrads lstm_cell_backward(LstmLayerParams& params,
                                 const LstmCellCache& cache,
                                 std::span<const double> dh,
                                 std::span<const double> dc);

/// Full-height convolution over the mode rows with zero same-padding in
/// time, ReLU activation. Each kernel emits one reconstructed sub-signal.
struct ReconstructionLayer {
  std::size_t num_kernels = 0;
  std::size_t kernel_height = 0;  // number of mode rows spanned
  std::size_t kernel_width = 0;   // time taps
  Tensor weights;                 // num_kernels x kernel_height x kernel_width
  Tensor bias;                    // num_kernels

  ReconstructionLayer() = default;
  ReconstructionLayer(std::size_t n_k, std::size_t height, std::size_t width);
};

/// Returns the num_kernels x L activation map; optionally records the
/// pre-activation values for the backward pass.
Matrix reconstruction_forward(MatrixView window,
                              const ReconstructionLayer& layer,
                              Matrix* pre_activation = nullptr);

/// Backward through ReLU and the convolution. Parameter gradients are
/// accumulated into layer.*.grad; the window is data, not a parameter, so
/// no input gradient is produced.
void reconstruction_backward(ReconstructionLayer& layer, MatrixView window,
                             const Matrix& pre_activation, const Matrix& d_out);

}  // namespace modecast::nn
