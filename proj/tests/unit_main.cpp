#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <new>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "support/alloc_counter.hpp"

namespace {
std::atomic<std::size_t> g_allocations{0};
}

namespace testsupport {
std::size_t allocation_count() {
  return g_allocations.load(std::memory_order_relaxed);
}
}  // namespace testsupport

void* operator new(std::size_t size) {
  g_allocations.fetch_add(1, std::memory_order_relaxed);
  if (void* p = std::malloc(size ? size : 1)) return p;
  throw std::bad_alloc{};
}

void* operator new[](std::size_t size) { return ::operator new(size); }

void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

int main(int argc, char** argv) {
#ifdef _OPENMP
  // The host may expose a single core; force a real partitioning so the
  // parallel drivers are exercised with thread counts > 1.
  omp_set_num_threads(4);
#endif
  return doctest::Context(argc, argv).run();
}
