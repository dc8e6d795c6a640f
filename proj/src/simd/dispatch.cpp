#include <cstdlib>
#include <string>

#include "layoutjudge/simd/kernels.hpp"

namespace layoutjudge::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("LAYOUTJUDGE_SIMD")) {
    if (std::string(env) == "scalar") return scalar_kernels();
  }
  if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace layoutjudge::simd
