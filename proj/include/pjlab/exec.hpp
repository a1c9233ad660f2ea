#pragma once

#include <exception>
#include <mutex>

namespace pjlab {

// Every data-parallel kernel has an OpenMP path and a serial reference path.
// Both reduce in the same fixed order, so their results are bit-identical.
enum class Exec { Serial, Parallel };

// Captures the first exception thrown inside an OpenMP region so it can be
// rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

/// Number of OpenMP threads used by Exec::Parallel kernels (1 without OpenMP).
int parallel_threads();
void set_parallel_threads(int n);

}  // namespace pjlab
