#include "pigan/gradcheck.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pigan/check.hpp"

namespace pigan::ad {

GradCheckReport finite_diff_check(
    const std::function<double(std::span<const double>)>& f,
    std::span<double> p, std::span<const double> analytic, double h,
    std::span<const std::size_t> coords) {
  PIGAN_CHECK(p.size() == analytic.size(), "gradient length != parameter length");
  GradCheckReport rep;
  for (std::size_t i : coords) {
    const double saved = p[i];
    p[i] = saved + h;
    const double fp = f(p);
    p[i] = saved - h;
    const double fm = f(p);
    p[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("finite_diff_check: non-finite loss probe");
    const double fd = (fp - fm) / (2.0 * h);
    const double g = analytic[i];
    const double err =
        std::abs(fd - g) / std::max({1.0, std::abs(fd), std::abs(g)});
    if (err > rep.max_rel_err) {
      rep.max_rel_err = err;
      rep.worst_index = i;
      rep.analytic_at_worst = g;
      rep.numeric_at_worst = fd;
    }
  }
  return rep;
}

GradCheckReport finite_diff_check(
    const std::function<double(std::span<const double>)>& f,
    std::span<double> p, std::span<const double> analytic, double h) {
  std::vector<std::size_t> coords(p.size());
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  return finite_diff_check(f, p, analytic, h, coords);
}

}  // namespace pigan::ad
