#include "diol/diagnostics.hpp"

#include <atomic>

namespace diol::diag {
namespace {
std::atomic<std::uint64_t> g_train_invocations{0};
}

std::uint64_t train_invocations() {
  return g_train_invocations.load(std::memory_order_relaxed);
}

void count_train_invocation() {
  g_train_invocations.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace diol::diag
