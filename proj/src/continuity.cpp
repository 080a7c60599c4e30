#include "conteq/continuity.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace conteq {

std::vector<double> log_schedule(double t0, double t_end, int count, bool include_zero) {
  std::vector<double> t;
  if (include_zero) t.push_back(0.0);
  if (count == 1) {
    t.push_back(t0);
    return t;
  }
  const double a = std::log(t0), b = std::log(t_end);
  for (int i = 0; i < count; ++i) t.push_back(std::exp(a + (b - a) * i / (count - 1)));
  return t;
}

ContinuationOutcome continue_in_t(ContinuationBackend& backend, const SolverConfig& config,
                                  const std::function<void(double)>& on_accept) {
  ContinuationOutcome out;
  double last_good = 0.0;
  bool have_good = false;
  // A failed parameter value triggers bisection toward the failure time;
  // afterwards the schedule is retried once from the refreshed state, so a
  // step that was merely too large does not end the run. A genuine
  // singularity fails again immediately and exhausts the retry budget.
  int retries = 3;
  size_t i = 0;
  while (i < config.t_schedule.size()) {
    const double t = config.t_schedule[i];
    if (t <= last_good && have_good) {
      ++i;
      continue;
    }
    if (backend.solve_at(t)) {
      backend.accept();
      out.accepted_t.push_back(t);
      last_good = t;
      have_good = true;
      if (on_accept) on_accept(t);
      ++i;
      continue;
    }
    backend.rollback();
    double lo = have_good ? last_good : 0.0;
    double hi = t;
    while ((hi - lo) > config.bisection_rel_width * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      if (backend.solve_at(mid)) {
        backend.accept();
        out.accepted_t.push_back(mid);
        if (on_accept) on_accept(mid);
        lo = mid;
        last_good = mid;
        have_good = true;
      } else {
        backend.rollback();
        hi = mid;
      }
    }
    out.failed = true;
    out.empirical_T = hi;
    if (retries-- <= 0) return out;
  }
  // All scheduled values accepted after retries: the run did not fail.
  if (out.failed && have_good && last_good >= config.t_schedule.back()) {
    out.failed = false;
    out.empirical_T = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace conteq
