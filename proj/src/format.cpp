#include "banditkit/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace banditkit {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), end);
}

void write_stats_csv(std::ostream& out, const AggregateStats& stats) {
  const std::size_t arms = stats.mean_counts.empty() ? 0 : stats.mean_counts.front().size();
  out << "n,mean_regret,se_regret";
  for (std::size_t k = 0; k < arms; ++k) out << ",mean_T_" << (k + 1);
  out << '\n';
  for (std::size_t c = 0; c < stats.checkpoints.size(); ++c) {
    out << stats.checkpoints[c] << ',' << format_double(stats.mean_regret[c]) << ','
        << format_double(stats.se_regret[c]);
    for (double m : stats.mean_counts[c]) out << ',' << format_double(m);
    out << '\n';
  }
}

void write_curves_csv(std::ostream& out, std::span<const BoundCurve> curves,
                      std::span<const std::uint64_t> grid) {
  out << "n,value,kind,params\n";
  for (const auto& curve : curves) {
    for (std::uint64_t n : grid) {
      if (n < curve.n_min) continue;
      out << n << ',' << format_double(curve(n)) << ',' << to_string(curve.kind) << ','
          << curve.params << '\n';
    }
  }
}

}  // namespace banditkit
