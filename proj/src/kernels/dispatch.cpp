#include <cstdlib>
#include <string>

#include "pigan/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define PIGAN_HAVE_AVX2 1
#else
#define PIGAN_HAVE_AVX2 0
#endif

namespace pigan::kernels {

bool cpu_supports_avx2() {
#if PIGAN_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const Backend* pick_default() {
  if (const char* env = std::getenv("PIGAN_KERNELS")) {
    const std::string want(env);
#if PIGAN_HAVE_AVX2
    if (want == "avx2" && cpu_supports_avx2()) return &avx2_backend();
#endif
    return &scalar_backend();
  }
#if PIGAN_HAVE_AVX2
  if (cpu_supports_avx2()) return &avx2_backend();
#endif
  return &scalar_backend();
}

const Backend* g_active = nullptr;

}  // namespace

const Backend& active() {
  if (!g_active) g_active = pick_default();
  return *g_active;
}

void set_active(const Backend& b) { g_active = &b; }

}  // namespace pigan::kernels
