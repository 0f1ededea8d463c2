#include "banditkit/config.hpp"

#include <cmath>
#include <cstring>
#include <iterator>
#include <map>
#include <memory>
#include <set>

namespace banditkit {

using nlohmann::json;

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

// ---------------------------------------------------------------------------
// Parsing with source lines.
//
// nlohmann/json does not report where a value came from, so the input is fed
// through an iterator that counts newlines, and a SAX handler records the
// line of the last token read when each value starts.

// JSON pointer reference token escaping: ~ -> ~0, / -> ~1.
std::string escape_key(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

struct LineCounter {
  std::size_t line = 1;
  std::size_t token_line = 1;  // line of the last non-whitespace character
};

class CountingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator() = default;
  CountingIterator(const char* pos, LineCounter* counter) : pos_(pos), counter_(counter) {}

  reference operator*() const { return *pos_; }
  CountingIterator& operator++() {
    const char c = *pos_;
    if (c == '\n') {
      ++counter_->line;
    } else if (c != ' ' && c != '\t' && c != '\r') {
      counter_->token_line = counter_->line;
    }
    ++pos_;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator copy = *this;
    ++*this;
    return copy;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.pos_ == b.pos_; }

 private:
  const char* pos_ = nullptr;
  LineCounter* counter_ = nullptr;
};

using DomBuilder = nlohmann::detail::json_sax_dom_parser<json>;

class LineRecordingSax {
 public:
  LineRecordingSax(json& root, const LineCounter& counter, std::map<std::string, std::size_t>& lines)
      : dom_(root, true), counter_(counter), lines_(lines) {}

  bool null() { return scalar(), dom_.null(); }
  bool boolean(bool v) { return scalar(), dom_.boolean(v); }
  bool number_integer(json::number_integer_t v) { return scalar(), dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return scalar(), dom_.number_unsigned(v); }
  bool number_float(json::number_float_t v, const json::string_t& s) {
    return scalar(), dom_.number_float(v, s);
  }
  bool string(json::string_t& v) { return scalar(), dom_.string(v); }
  bool binary(json::binary_t& v) { return scalar(), dom_.binary(v); }

  bool start_object(std::size_t n) {
    push(false);
    return dom_.start_object(n);
  }
  bool key(json::string_t& k) {
    frames_.back().key = k;
    return dom_.key(k);
  }
  bool end_object() {
    frames_.pop_back();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    push(true);
    return dom_.start_array(n);
  }
  bool end_array() {
    frames_.pop_back();
    return dom_.end_array();
  }
  bool parse_error(std::size_t pos, const std::string& token, const nlohmann::detail::exception& ex) {
    return dom_.parse_error(pos, token, ex);
  }

 private:
  struct Frame {
    std::string pointer;
    bool array = false;
    std::size_t index = 0;
    std::string key;
  };

  std::string next_pointer() {
    if (frames_.empty()) return "";
    Frame& top = frames_.back();
    if (top.array) return top.pointer + "/" + std::to_string(top.index++);
    return top.pointer + "/" + escape_key(top.key);
  }
  void scalar() { lines_[next_pointer()] = counter_.token_line; }
  void push(bool array) {
    std::string pointer = next_pointer();
    lines_[pointer] = counter_.token_line;
    frames_.push_back(Frame{std::move(pointer), array, 0, {}});
  }

  DomBuilder dom_;
  const LineCounter& counter_;
  std::map<std::string, std::size_t>& lines_;
  std::vector<Frame> frames_;
};

// ---------------------------------------------------------------------------
// Typed readers.

class Reader {
 public:
  explicit Reader(std::map<std::string, std::size_t> lines) : lines_(std::move(lines)) {}

  std::size_t line(const std::string& pointer) const {
    auto it = lines_.find(pointer);
    return it == lines_.end() ? 0 : it->second;
  }

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw ConfigError(line(pointer), message + " (at " + (pointer.empty() ? "/" : pointer) + ")");
  }

  void expect_object(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) fail(ptr, "expected an object");
    for (const auto& item : j.items()) {
      bool known = false;
      for (const char* name : allowed) known = known || item.key() == name;
      if (!known) fail(ptr + "/" + escape_key(item.key()), "unknown field \"" + item.key() + "\"");
    }
  }

  const json& field(const json& j, const std::string& ptr, const char* name) const {
    if (!j.contains(name)) fail(ptr, std::string("missing required field \"") + name + "\"");
    return j.at(name);
  }

  double number(const json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    return j.get<double>();
  }

  std::uint64_t unsigned_integer(const json& j, const std::string& ptr) const {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) fail(ptr, "expected a nonnegative integer");
    if (j.is_number_float()) {
      const double v = j.get<double>();
      if (v >= 0.0 && v < 0x1.0p64 && std::floor(v) == v) return static_cast<std::uint64_t>(v);
    }
    fail(ptr, "expected a nonnegative integer");
  }

  std::string text(const json& j, const std::string& ptr) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  // Exactly one key; returns it.
  std::string tag(const json& j, const std::string& ptr, const char* what) const {
    if (!j.is_object() || j.size() != 1) fail(ptr, std::string(what) + " must be an object with exactly one key");
    return j.begin().key();
  }

 private:
  std::map<std::string, std::size_t> lines_;
};

ArmDistribution parse_arm(const Reader& r, const json& j, const std::string& ptr) {
  const std::string kind = r.tag(j, ptr, "an arm");
  const std::string sub = ptr + "/" + escape_key(kind);
  const json& v = j.at(kind);
  try {
    if (kind == "dirac") return Dirac{r.number(v, sub)};
    if (kind == "bernoulli") return Bernoulli{r.number(v, sub)};
    if (kind == "twopoint") {
      if (!v.is_array() || v.size() != 3) r.fail(sub, "twopoint expects [p, a, b]");
      return TwoPoint{r.number(v[0], sub + "/0"), r.number(v[1], sub + "/1"), r.number(v[2], sub + "/2")};
    }
  } catch (const ContractViolation& e) {
    r.fail(sub, e.what());
  }
  r.fail(ptr, "unknown arm law \"" + kind + "\" (expected dirac, bernoulli or twopoint)");
}

Environment parse_environment(const Reader& r, const json& j, const std::string& ptr) {
  r.expect_object(j, ptr, {"arms"});
  const std::string arms_ptr = ptr + "/arms";
  const json& arms = r.field(j, ptr, "arms");
  if (!arms.is_array()) r.fail(arms_ptr, "\"arms\" must be an array");
  std::vector<ArmDistribution> dists;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    dists.push_back(parse_arm(r, arms[i], arms_ptr + "/" + std::to_string(i)));
  }
  try {
    return Environment(std::move(dists));
  } catch (const ContractViolation& e) {
    r.fail(arms_ptr, e.what());
  }
}

ExplorationFn parse_fn(const Reader& r, const json& j, const std::string& ptr) {
  r.expect_object(j, ptr, {"c0", "c1", "c2", "c3", "e"});
  ExplorationFn f;
  auto read = [&](const char* name, double& out) {
    if (j.contains(name)) out = r.number(j.at(name), ptr + "/" + name);
  };
  read("c0", f.c0);
  read("c1", f.c1);
  read("c2", f.c2);
  read("c3", f.c3);
  read("e", f.e);
  try {
    f.validate();
  } catch (const ContractViolation& e) {
    r.fail(ptr, e.what());
  }
  return f;
}

PolicySpec parse_policy(const Reader& r, const json& j, const std::string& ptr, std::size_t arms) {
  const std::string kind = r.tag(j, ptr, "a policy");
  const std::string sub = ptr + "/" + escape_key(kind);
  const json& v = j.at(kind);
  PolicySpec spec;
  if (kind == "ucb_rho") {
    spec = UcbRho{r.number(v, sub)};
  } else if (kind == "ucb_generic") {
    if (!v.is_array()) r.fail(sub, "ucb_generic expects a list of exploration functions");
    UcbGeneric generic;
    for (std::size_t i = 0; i < v.size(); ++i) generic.fns.push_back(parse_fn(r, v[i], sub + "/" + std::to_string(i)));
    spec = std::move(generic);
  } else if (kind == "etc") {
    r.expect_object(v, sub, {"s"});
    spec = ExploreThenCommit{r.unsigned_integer(r.field(v, sub, "s"), sub + "/s")};
  } else if (kind == "uniform") {
    r.expect_object(v, sub, {});
    spec = UniformRandom{};
  } else {
    r.fail(ptr, "unknown policy \"" + kind + "\" (expected ucb_rho, ucb_generic, etc or uniform)");
  }
  try {
    validate(spec, arms);
  } catch (const ContractViolation& e) {
    r.fail(sub, e.what());
  }
  return spec;
}

const std::map<std::string, BoundKind>& curve_kinds() {
  static const std::map<std::string, BoundKind> kinds = {
      {"prop1", BoundKind::Prop1Count},     {"prop2_h", BoundKind::Prop2H},
      {"prop2_f", BoundKind::Prop2Lower},   {"thm3", BoundKind::Thm3Regret},
      {"lemma1", BoundKind::Lemma1Count},   {"lower_alpha", BoundKind::LowerCurveAlpha},
      {"ucb1", BoundKind::Ucb1Regret},      {"dirac_generic", BoundKind::DiracGenericCount},
      {"etc", BoundKind::EtcEstimate},
  };
  return kinds;
}

CurveRequest parse_curve(const Reader& r, const json& j, const std::string& ptr) {
  if (!j.is_object()) r.fail(ptr, "a curve request must be an object");
  const std::string name = r.text(r.field(j, ptr, "kind"), ptr + "/kind");
  auto it = curve_kinds().find(name);
  if (it == curve_kinds().end()) r.fail(ptr + "/kind", "unknown curve kind \"" + name + "\"");

  CurveRequest req;
  req.kind = it->second;
  auto num = [&](const char* key) { return r.number(r.field(j, ptr, key), ptr + "/" + key); };
  switch (req.kind) {
    case BoundKind::Prop1Count:
    case BoundKind::Prop2H:
    case BoundKind::Prop2Lower:
      r.expect_object(j, ptr, {"kind", "rho"});
      req.rho = num("rho");
      break;
    case BoundKind::Thm3Regret:
      r.expect_object(j, ptr, {"kind", "rho", "beta"});
      req.rho = num("rho");
      req.beta = num("beta");
      break;
    case BoundKind::Lemma1Count:
      r.expect_object(j, ptr, {"kind", "arm", "beta", "f", "f_star"});
      req.arm = r.unsigned_integer(r.field(j, ptr, "arm"), ptr + "/arm");
      req.beta = num("beta");
      req.f = parse_fn(r, r.field(j, ptr, "f"), ptr + "/f");
      req.f_star = parse_fn(r, r.field(j, ptr, "f_star"), ptr + "/f_star");
      break;
    case BoundKind::LowerCurveAlpha:
      r.expect_object(j, ptr, {"kind", "arm", "alpha"});
      req.arm = r.unsigned_integer(r.field(j, ptr, "arm"), ptr + "/arm");
      req.alpha = num("alpha");
      break;
    case BoundKind::Ucb1Regret:
      r.expect_object(j, ptr, {"kind"});
      break;
    case BoundKind::DiracGenericCount:
      r.expect_object(j, ptr, {"kind", "f"});
      req.f = parse_fn(r, r.field(j, ptr, "f"), ptr + "/f");
      break;
    case BoundKind::EtcEstimate:
      r.expect_object(j, ptr, {"kind", "sigma", "s"});
      req.sigma = num("sigma");
      req.s = r.unsigned_integer(r.field(j, ptr, "s"), ptr + "/s");
      break;
  }
  return req;
}

const std::map<std::string, VerifiedBound>& verified_bounds() {
  static const std::map<std::string, VerifiedBound> bounds = {
      {"prop1", VerifiedBound::Prop1},
      {"prop2", VerifiedBound::Prop2},
      {"thm3", VerifiedBound::Thm3},
      {"dirac_generic", VerifiedBound::DiracGeneric},
  };
  return bounds;
}

VerifyRequest parse_verify(const Reader& r, const json& j, const std::string& ptr) {
  r.expect_object(j, ptr, {"bound", "beta"});
  const std::string name = r.text(r.field(j, ptr, "bound"), ptr + "/bound");
  auto it = verified_bounds().find(name);
  if (it == verified_bounds().end()) r.fail(ptr + "/bound", "unknown bound \"" + name + "\"");
  VerifyRequest req;
  req.bound = it->second;
  if (req.bound == VerifiedBound::Thm3) {
    req.beta = r.number(r.field(j, ptr, "beta"), ptr + "/beta");
  } else if (j.contains("beta")) {
    r.fail(ptr + "/beta", "\"beta\" only applies to thm3");
  }
  return req;
}

ExponentRequest parse_exponent(const Reader& r, const json& j, const std::string& ptr) {
  r.expect_object(j, ptr, {"window"});
  const std::string wptr = ptr + "/window";
  const json& w = r.field(j, ptr, "window");
  if (!w.is_array() || w.size() != 2) r.fail(wptr, "window expects [n_lo, n_hi]");
  ExponentRequest req{r.unsigned_integer(w[0], wptr + "/0"), r.unsigned_integer(w[1], wptr + "/1")};
  if (req.n_lo >= req.n_hi) r.fail(wptr, "window must satisfy n_lo < n_hi");
  return req;
}

bool two_dirac(const Environment& env) { return env.arms() == 2 && env.all_dirac() && !env.degenerate(); }

// Cross-field preconditions of the verify request.
void check_verify(const Reader& r, const ExperimentConfig& c) {
  const std::string ptr = "/verify";
  if (!c.policy) r.fail(ptr, "verify needs a \"policy\"");
  const auto* rho = std::get_if<UcbRho>(&*c.policy);
  switch (c.verify->bound) {
    case VerifiedBound::Prop1:
    case VerifiedBound::Prop2:
      if (!rho) r.fail(ptr + "/bound", "this bound applies to the ucb_rho policy");
      if (!two_dirac(c.environment)) r.fail(ptr + "/bound", "this bound needs two Dirac arms with distinct locations");
      if (c.environment.min_gap() > 1.0) r.fail(ptr + "/bound", "gap exceeds 1");
      break;
    case VerifiedBound::Thm3:
      if (!rho) r.fail(ptr + "/bound", "thm3 applies to the ucb_rho policy");
      if (!(rho->rho < 0.5)) r.fail("/policy/ucb_rho", "thm3 needs rho < 1/2");
      if (c.environment.degenerate()) r.fail("/environment", "thm3 needs a suboptimal arm");
      if (!(c.verify->beta > 0.0 && c.verify->beta < 1.0)) r.fail(ptr + "/beta", "beta must lie in (0,1)");
      if (!(2.0 * rho->rho * c.verify->beta < 1.0)) r.fail(ptr + "/beta", "thm3 needs 2 rho beta < 1");
      break;
    case VerifiedBound::DiracGeneric:
      if (!std::holds_alternative<UcbGeneric>(*c.policy)) {
        r.fail(ptr + "/bound", "dirac_generic applies to the ucb_generic policy");
      }
      if (!two_dirac(c.environment)) r.fail(ptr + "/bound", "dirac_generic needs two Dirac arms with distinct locations");
      break;
  }
}

json fn_json(const ExplorationFn& f) {
  json j = json::object();
  if (f.c0 != 0.0) j["c0"] = f.c0;
  if (f.c1 != 0.0) j["c1"] = f.c1;
  if (f.c2 != 0.0) j["c2"] = f.c2;
  if (f.c3 != 0.0) j["c3"] = f.c3;
  if (f.e != 0.0) j["e"] = f.e;
  return j;
}

json curve_json(const CurveRequest& req) {
  json j;
  j["kind"] = std::string(to_string(req.kind));
  switch (req.kind) {
    case BoundKind::Prop1Count:
    case BoundKind::Prop2H:
    case BoundKind::Prop2Lower:
      j["rho"] = req.rho;
      break;
    case BoundKind::Thm3Regret:
      j["rho"] = req.rho;
      j["beta"] = req.beta;
      break;
    case BoundKind::Lemma1Count:
      j["arm"] = req.arm;
      j["beta"] = req.beta;
      j["f"] = fn_json(req.f);
      j["f_star"] = fn_json(req.f_star);
      break;
    case BoundKind::LowerCurveAlpha:
      j["arm"] = req.arm;
      j["alpha"] = req.alpha;
      break;
    case BoundKind::Ucb1Regret:
      break;
    case BoundKind::DiracGenericCount:
      j["f"] = fn_json(req.f);
      break;
    case BoundKind::EtcEstimate:
      j["sigma"] = req.sigma;
      j["s"] = req.s;
      break;
  }
  return j;
}

std::size_t arm_index(const CurveRequest& req, const Environment& env) {
  if (req.arm < 1 || req.arm > env.arms()) {
    throw ContractViolation("arm " + std::to_string(req.arm) + " out of range 1.." + std::to_string(env.arms()));
  }
  return req.arm - 1;
}

BoundCurve build_curve(const CurveRequest& req, const ExperimentConfig& config, bool tabulate) {
  const Environment& env = config.environment;
  switch (req.kind) {
    case BoundKind::Prop1Count:
      return prop1_curve(req.rho, env.min_gap());
    case BoundKind::Prop2H:
      return prop2_h_curve(req.rho, env.min_gap());
    case BoundKind::Prop2Lower:
      if (!tabulate) return prop2_h_curve(req.rho, env.min_gap());
      return prop2_lower_curve(req.rho, env.min_gap(), std::max<std::uint64_t>(config.horizon, 2));
    case BoundKind::Thm3Regret:
      return thm3_curve(env, req.rho, req.beta);
    case BoundKind::Lemma1Count: {
      const std::size_t k = arm_index(req, env);
      if (!(env.gap(k) > 0.0)) throw ContractViolation("lemma1 needs a suboptimal arm");
      return lemma1_curve(req.f, req.f_star, env.gap(k), req.beta);
    }
    case BoundKind::LowerCurveAlpha:
      return lower_alpha_curve(env, arm_index(req, env), req.alpha);
    case BoundKind::Ucb1Regret:
      return ucb1_curve(env);
    case BoundKind::DiracGenericCount:
      return dirac_generic_curve(req.f, env.min_gap());
    case BoundKind::EtcEstimate:
      if (env.arms() != 2) throw ContractViolation("the etc estimate is a two-arm formula");
      return etc_curve(env.min_gap(), req.sigma, req.s);
  }
  throw ContractViolation("unknown curve kind");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  LineCounter counter;
  std::map<std::string, std::size_t> lines;
  json root;
  {
    LineRecordingSax sax(root, counter, lines);
    const char* begin = text.data();
    try {
      json::sax_parse(CountingIterator(begin, &counter), CountingIterator(begin + text.size(), &counter), &sax);
    } catch (const json::exception& e) {
      throw ConfigError(counter.line, std::string("malformed JSON: ") + e.what());
    }
  }
  const Reader r(std::move(lines));

  r.expect_object(root, "", {"environment", "policy", "horizon", "replications", "seed", "curves", "verify",
                             "exponent", "output"});
  ExperimentConfig config{parse_environment(r, r.field(root, "", "environment"), "/environment")};
  const std::size_t arms = config.environment.arms();

  if (root.contains("policy")) config.policy = parse_policy(r, root.at("policy"), "/policy", arms);

  config.horizon = r.unsigned_integer(r.field(root, "", "horizon"), "/horizon");
  if (config.horizon < arms) {
    r.fail("/horizon", "horizon must be at least the number of arms (" + std::to_string(arms) + ")");
  }
  if (root.contains("replications")) {
    config.replications = r.unsigned_integer(root.at("replications"), "/replications");
    if (config.replications < 1) r.fail("/replications", "replications must be at least 1");
  }
  if (root.contains("seed")) config.seed = r.unsigned_integer(root.at("seed"), "/seed");

  if (root.contains("curves")) {
    const json& curves = root.at("curves");
    if (!curves.is_array()) r.fail("/curves", "\"curves\" must be an array");
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const std::string ptr = "/curves/" + std::to_string(i);
      config.curves.push_back(parse_curve(r, curves[i], ptr));
      try {
        build_curve(config.curves.back(), config, false);
      } catch (const Error& e) {
        r.fail(ptr, e.what());
      }
    }
  }
  if (root.contains("verify")) {
    config.verify = parse_verify(r, root.at("verify"), "/verify");
    check_verify(r, config);
  }
  if (root.contains("exponent")) {
    config.exponent = parse_exponent(r, root.at("exponent"), "/exponent");
    if (config.exponent->n_hi > config.horizon) r.fail("/exponent/window", "window extends past the horizon");
  }
  if (root.contains("output")) config.output = r.text(root.at("output"), "/output");
  return config;
}

json to_json(const ArmDistribution& dist) {
  const auto& law = dist.variant();
  if (const auto* d = std::get_if<Dirac>(&law)) return {{"dirac", d->value}};
  if (const auto* b = std::get_if<Bernoulli>(&law)) return {{"bernoulli", b->p}};
  const auto& t = std::get<TwoPoint>(law);
  return {{"twopoint", {t.p, t.a, t.b}}};
}

json to_json(const Environment& env) {
  json arms = json::array();
  for (const auto& arm : env.distributions()) arms.push_back(to_json(arm));
  return {{"arms", arms}};
}

json to_json(const ExplorationFn& f) { return fn_json(f); }

json to_json(const PolicySpec& spec) {
  if (const auto* u = std::get_if<UcbRho>(&spec)) return {{"ucb_rho", u->rho}};
  if (const auto* g = std::get_if<UcbGeneric>(&spec)) {
    json fns = json::array();
    for (const auto& f : g->fns) fns.push_back(fn_json(f));
    return {{"ucb_generic", fns}};
  }
  if (const auto* e = std::get_if<ExploreThenCommit>(&spec)) return {{"etc", {{"s", e->s}}}};
  return {{"uniform", json::object()}};
}

json to_json(const ExperimentConfig& config) {
  json j;
  j["environment"] = to_json(config.environment);
  if (config.policy) j["policy"] = to_json(*config.policy);
  j["horizon"] = config.horizon;
  j["replications"] = config.replications;
  j["seed"] = config.seed;
  if (!config.curves.empty()) {
    json curves = json::array();
    for (const auto& c : config.curves) curves.push_back(curve_json(c));
    j["curves"] = curves;
  }
  if (config.verify) {
    json v;
    v["bound"] = std::string(to_string(config.verify->bound));
    if (config.verify->bound == VerifiedBound::Thm3) v["beta"] = config.verify->beta;
    j["verify"] = v;
  }
  if (config.exponent) j["exponent"] = {{"window", {config.exponent->n_lo, config.exponent->n_hi}}};
  if (config.output) j["output"] = *config.output;
  return j;
}

std::string serialize_config(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string_view to_string(VerifiedBound bound) noexcept {
  switch (bound) {
    case VerifiedBound::Prop1: return "prop1";
    case VerifiedBound::Prop2: return "prop2";
    case VerifiedBound::Thm3: return "thm3";
    case VerifiedBound::DiracGeneric: return "dirac_generic";
  }
  return "unknown";
}

BoundCurve make_curve(const CurveRequest& request, const ExperimentConfig& config) {
  try {
    return build_curve(request, config, true);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(0, std::string(to_string(request.kind)) + ": " + e.what());
  }
}

}  // namespace banditkit
