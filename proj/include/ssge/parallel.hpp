#pragma once

namespace ssge {

// Number of threads batched operations may use. Defaults to the OpenMP
// thread count, capped by the SS_THREADS environment variable when set.
// Every parallel loop in the library writes each output cell from exactly
// one thread with a fixed inner summation order, so results do not depend
// on this value.
int max_threads();

// Temporarily overrides max_threads() (used by tests to compare runs at
// different parallelism levels). Not thread-safe; install from one thread.
class ThreadLimitGuard {
public:
  explicit ThreadLimitGuard(int n);
  ~ThreadLimitGuard();
  ThreadLimitGuard(const ThreadLimitGuard&) = delete;
  ThreadLimitGuard& operator=(const ThreadLimitGuard&) = delete;

private:
  int previous_;
};

}  // namespace ssge
