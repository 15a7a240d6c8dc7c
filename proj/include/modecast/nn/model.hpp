#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modecast/matrix.hpp"
#include "modecast/nn/layers.hpp"
#include "modecast/nn/tensor.hpp"

namespace modecast::nn {

enum class Variant { lstm, vmd_lstm, vmd_cnn_lstm };

Variant variant_from_string(const std::string& s);
const char* to_string(Variant v);

/// Assembled forecasting network: optional reconstruction convolution over
/// the decomposed rows, an LSTM stack fed column by column, and an affine
/// head mapping the last hidden state to one scalar.
///
/// The LSTM input width is the window height for vmd_lstm (and 1 for the
/// raw variant); vmd_cnn_lstm widens it by the number of reconstruction
/// kernels, with the reconstructed rows stacked under the decomposed rows.
class Model {
 public:
  Model() = default;
  Model(Variant variant, std::size_t window_height, std::size_t seq_len,
        std::size_t num_kernels, std::size_t hidden, std::size_t layers);

  Variant variant() const { return variant_; }
  std::size_t window_height() const { return height_; }
  std::size_t seq_len() const { return seq_len_; }
  std::size_t hidden_size() const { return hidden_; }
  std::size_t num_layers() const { return lstm_.size(); }
  std::size_t lstm_input_width() const;

  /// Forward pass recording intermediates for backward().
  double predict(MatrixView window);

  /// Forward pass without recording; usable on frozen models.
  double predict_const(MatrixView window) const;

  /// Reverse-mode accumulation into every parameter's grad buffer, given
  /// the gradient of the loss w.r.t. the prediction.
  void backward(double d_prediction);

  /// Stable parameter order (used by the optimizer and checkpoints).
  std::vector<Tensor*> parameters();
  std::vector<std::pair<std::string, Tensor*>> named_parameters();

  void ensure_grads();
  void zero_grads();
  std::size_t parameter_count();

  std::optional<ReconstructionLayer>& reconstruction() { return recon_; }
  std::vector<LstmLayerParams>& lstm_layers() { return lstm_; }
  Tensor& head_weight() { return head_w_; }
  Tensor& head_bias() { return head_b_; }

 private:
  double forward_impl(MatrixView window, bool record);

  Variant variant_ = Variant::lstm;
  std::size_t height_ = 1;
  std::size_t seq_len_ = 12;
  std::size_t hidden_ = 8;
  std::optional<ReconstructionLayer> recon_;
  std::vector<LstmLayerParams> lstm_;
  Tensor head_w_;
  Tensor head_b_;

  struct ForwardCache {
    Matrix window;
    Matrix recon_pre;
    Matrix recon_out;
    std::vector<std::vector<LstmCellCache>> cells;  // [layer][t]
    std::vector<double> h_top;
    bool valid = false;
  };
  ForwardCache cache_;
};

}  // namespace modecast::nn
