#include "hgc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hgc/common.hpp"

namespace hgc {

double si_sdr(const std::vector<double>& estimate, const std::vector<double>& reference) {
  if (estimate.size() != reference.size()) {
    throw ValidationError("estimate has " + std::to_string(estimate.size()) +
                          " samples, reference has " + std::to_string(reference.size()));
  }
  if (estimate.empty()) throw ValidationError("signals are empty");

  const std::size_t n = estimate.size();
  double mean_e = 0.0;
  double mean_r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_e += estimate[i];
    mean_r += reference[i];
  }
  mean_e /= static_cast<double>(n);
  mean_r /= static_cast<double>(n);

  double rr = 0.0;
  double er = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = estimate[i] - mean_e;
    const double r = reference[i] - mean_r;
    rr += r * r;
    er += e * r;
  }
  if (rr == 0.0) {
    throw ValidationError("reference has zero energy after mean removal");
  }

  const double scale = er / rr;
  const double target = scale * scale * rr;  // |projection|^2
  double distortion = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = estimate[i] - mean_e;
    const double r = reference[i] - mean_r;
    const double d = e - scale * r;
    distortion += d * d;
  }

  if (distortion == 0.0) return 100.0;
  if (target == 0.0) return -100.0;
  const double db = 10.0 * std::log10(target / distortion);
  return std::clamp(db, -100.0, 100.0);
}

}  // namespace hgc
