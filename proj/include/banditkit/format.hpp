#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include "banditkit/bounds.hpp"
#include "banditkit/sim.hpp"

namespace banditkit {

/// Shortest decimal string that parses back to the same double
/// ("inf", "-inf", "nan" for non-finite values).
std::string format_double(double value);

/// Header `n,mean_regret,se_regret,mean_T_1,...,mean_T_K`, one row per checkpoint.
void write_stats_csv(std::ostream& out, const AggregateStats& stats);

/// Header `n,value,kind,params`; each curve is evaluated on every grid point
/// at or above its n_min.
void write_curves_csv(std::ostream& out, std::span<const BoundCurve> curves,
                      std::span<const std::uint64_t> grid);

}  // namespace banditkit
