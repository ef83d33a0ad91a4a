#include "ssge/parallel.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ssge {
namespace {

int env_thread_cap() {
  const char* raw = std::getenv("SS_THREADS");
  if (raw == nullptr) return 0;
  const int n = std::atoi(raw);
  return n > 0 ? n : 0;
}

int& override_slot() {
  static int value = 0;
  return value;
}

}  // namespace

int max_threads() {
  if (override_slot() > 0) return override_slot();
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  static const int cap = env_thread_cap();
  if (cap > 0) n = std::min(n, cap);
  return std::max(n, 1);
}

ThreadLimitGuard::ThreadLimitGuard(int n) : previous_(override_slot()) {
  override_slot() = n;
}

ThreadLimitGuard::~ThreadLimitGuard() { override_slot() = previous_; }

}  // namespace ssge
