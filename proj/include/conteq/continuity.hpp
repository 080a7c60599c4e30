#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "conteq/tensor.hpp"

namespace conteq {

/// Which form of the equation a run solves:
///   unnormalized:  omega = omega_0 - t Ric(omega)
///   normalized:    (t+1) omega = omega_0 - t Ric(omega)
enum class Variant { unnormalized, normalized };

enum class Backend { torus, sphere };

struct SolverConfig {
  double newton_tol = 1e-10;
  int max_newton = 30;
  double damping = 0.5;          // backtracking factor of the positivity line search
  int max_linesearch = 40;
  double bisection_rel_width = 1e-3;
  std::vector<double> t_schedule;  // strictly increasing, starts at t >= 0
  int grid_n = 128;
};

/// Log-spaced schedule 0, t0, ..., t_end (count entries after the leading 0).
std::vector<double> log_schedule(double t0, double t_end, int count, bool include_zero = true);

/// One backend under continuation: warm-started solves plus state bookkeeping.
class ContinuationBackend {
 public:
  virtual ~ContinuationBackend() = default;
  virtual bool solve_at(double t) = 0;
  virtual void accept() = 0;
  virtual void rollback() = 0;
};

struct ContinuationOutcome {
  std::vector<double> accepted_t;
  bool failed = false;
  /// Empirical maximal time from bisection when the continuation failed.
  double empirical_T = std::numeric_limits<double>::infinity();
};

/// Walk the schedule; on failure bisect between the last good and the failed
/// t down to the configured relative width and report the failure time.
/// on_accept runs after each accepted parameter value.
ContinuationOutcome continue_in_t(ContinuationBackend& backend, const SolverConfig& config,
                                  const std::function<void(double)>& on_accept = {});

}  // namespace conteq
