#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pigan::ad {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::size_t worst_index = 0;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
};

// Central-difference check of an analytic gradient. f is re-evaluated with one
// coordinate of p perturbed by +-h; errors are |fd - g| / max(1, |fd|, |g|).
// Throws if any probe of f is non-finite.
GradCheckReport finite_diff_check(
    const std::function<double(std::span<const double>)>& f,
    std::span<double> p, std::span<const double> analytic, double h);

// Same, but probes only the given coordinate subset.
GradCheckReport finite_diff_check(
    const std::function<double(std::span<const double>)>& f,
    std::span<double> p, std::span<const double> analytic, double h,
    std::span<const std::size_t> coords);

}  // namespace pigan::ad
