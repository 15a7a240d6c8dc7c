#include "modecast/kernels/cpu_features.hpp"

namespace modecast::kernels {

namespace {

CpuFeatures probe() {
  CpuFeatures f;
#if defined(__x86_64__) || defined(__i386__)
  // __builtin_cpu_supports covers the OS xsave state as well.
  f.avx2 = __builtin_cpu_supports("avx2") != 0;
  f.fma = __builtin_cpu_supports("fma") != 0;
#endif
  return f;
}

}  // namespace

const CpuFeatures& CpuFeatures::get() {
  static const CpuFeatures features = probe();
  return features;
}

}  // namespace modecast::kernels
