#include <cstdlib>
#include <cstring>

#include "modecast/errors.hpp"
#include "modecast/kernels/cpu_features.hpp"
#include "modecast/kernels/kernels.hpp"

namespace modecast::kernels {

#ifdef MODECAST_WITH_AVX2
const KernelTable& avx2_table();
#endif

namespace {

bool avx2_usable() {
#ifdef MODECAST_WITH_AVX2
  const auto& f = CpuFeatures::get();
  return f.avx2 && f.fma;
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("MODECAST_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_usable()) return Backend::avx2;
    // unknown or unavailable value: fall through to auto selection
  }
  return avx2_usable() ? Backend::avx2 : Backend::scalar;
}

Backend& current() {
  static Backend backend = detect();
  return backend;
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return avx2_usable();
  }
  return false;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

Backend active_backend() { return current(); }

const KernelTable& active() {
  switch (current()) {
#ifdef MODECAST_WITH_AVX2
    case Backend::avx2:
      return avx2_table();
#endif
    default:
      return scalar_table();
  }
}

void force_backend(Backend b) {
  if (!backend_available(b)) {
    fail(ErrorKind::spec,
         std::string("kernels: backend not available on this host: ") +
             backend_name(b));
  }
  current() = b;
}

}  // namespace modecast::kernels
