#include <atomic>
#include <cstdlib>
#include <string>

#include "nlkl/errors.hpp"
#include "nlkl/simd/kernels.hpp"

namespace nlkl {

std::string_view to_string(BoundaryRule rule) {
  switch (rule) {
    case BoundaryRule::ZeroExtension: return "zero";
    case BoundaryRule::InGridOnly: return "in-grid";
    case BoundaryRule::Periodic: return "periodic";
  }
  return "zero";
}

BoundaryRule boundary_rule_from_string(std::string_view name) {
  if (name == "zero") return BoundaryRule::ZeroExtension;
  if (name == "in-grid") return BoundaryRule::InGridOnly;
  if (name == "periodic") return BoundaryRule::Periodic;
  throw Error(ErrorCode::Config, "unknown boundary rule '" + std::string(name) + "'");
}

namespace simd {
namespace {

const KernelTable* best_available() {
  if (const KernelTable* t = avx2_kernels()) return t;
  if (const KernelTable* t = neon_kernels()) return t;
  return &scalar_kernels();
}

const KernelTable* by_name(std::string_view name) {
  if (name == "scalar") return &scalar_kernels();
  if (name == "avx2") return avx2_kernels();
  if (name == "neon") return neon_kernels();
  if (name == "auto" || name.empty()) return best_available();
  return nullptr;
}

const KernelTable* initial() {
  if (const char* env = std::getenv("NLKL_SIMD")) {
    if (const KernelTable* t = by_name(env)) return t;
  }
  return best_available();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{initial()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(std::string_view name) {
  const KernelTable* t = by_name(name);
  if (t == nullptr) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

}  // namespace simd
}  // namespace nlkl
