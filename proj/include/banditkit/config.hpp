#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "banditkit/bounds.hpp"
#include "banditkit/core.hpp"
#include "banditkit/error.hpp"
#include "banditkit/policies.hpp"

namespace banditkit {

/// Invalid experiment configuration. line() is the 1-based line of the
/// offending JSON value, or 0 when the problem is not tied to one.
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// One entry of "curves". Only the fields relevant to `kind` are read or
/// written; `arm` is 1-based as in the config file.
struct CurveRequest {
  BoundKind kind = BoundKind::Prop1Count;
  double rho = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  std::uint64_t s = 0;
  std::size_t arm = 0;
  ExplorationFn f;
  ExplorationFn f_star;

  friend bool operator==(const CurveRequest&, const CurveRequest&) = default;
};

enum class VerifiedBound { Prop1, Prop2, Thm3, DiracGeneric };

struct VerifyRequest {
  VerifiedBound bound = VerifiedBound::Prop1;
  double beta = 0.0;  // thm3 only
  friend bool operator==(const VerifyRequest&, const VerifyRequest&) = default;
};

struct ExponentRequest {
  std::uint64_t n_lo = 0;
  std::uint64_t n_hi = 0;
  friend bool operator==(const ExponentRequest&, const ExponentRequest&) = default;
};

struct ExperimentConfig {
  Environment environment;
  std::optional<PolicySpec> policy;
  std::uint64_t horizon = 0;
  std::uint64_t replications = 1;
  std::uint64_t seed = 0;
  std::vector<CurveRequest> curves;
  std::optional<VerifyRequest> verify;
  std::optional<ExponentRequest> exponent;
  std::optional<std::string> output;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates a JSON experiment config. Unknown keys, wrong types
/// and violated preconditions all raise ConfigError with the line number of
/// the offending value.
ExperimentConfig parse_config(std::string_view text);

nlohmann::json to_json(const ArmDistribution& dist);
nlohmann::json to_json(const Environment& env);
nlohmann::json to_json(const ExplorationFn& f);
nlohmann::json to_json(const PolicySpec& spec);
nlohmann::json to_json(const ExperimentConfig& config);

/// Canonical JSON text of `config`; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

std::string_view to_string(VerifiedBound bound) noexcept;

/// Builds the analytic curve for a request against `config`'s environment.
/// Throws ConfigError when the request does not fit the environment.
BoundCurve make_curve(const CurveRequest& request, const ExperimentConfig& config);

}  // namespace banditkit
