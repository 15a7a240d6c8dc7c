#pragma once

namespace modecast::kernels {

/// Runtime CPU feature probe, resolved once.
struct CpuFeatures {
  bool avx2 = false;
  bool fma = false;

  static const CpuFeatures& get();
};

}  // namespace modecast::kernels
