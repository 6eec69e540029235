#pragma once

#include <cstdint>

namespace diol::diag {

// Process-wide count of training runs (K-Means and the Z-Score baseline
// both count). Lets callers assert that a path which loads a model from a
// file never trained anything.
std::uint64_t train_invocations();

// Called once per training run by the library; not for external use.
void count_train_invocation();

}  // namespace diol::diag
