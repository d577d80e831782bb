#include "corrgame/arbiter.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "corrgame/error.hpp"
#include "corrgame/rng.hpp"

namespace corrgame {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunRecord play_one(const GameSpec& spec, double p_a, double p_b,
                   Angle theta_a, Angle theta_b, std::uint64_t seed,
                   std::uint64_t k) {
  RunRecord rec;
  rec.index = k;
  auto axes = substream(seed, k, Substream::kAxes);
  rec.alice_axis = axes.uniform() < p_a ? AliceAxis::kZ : AliceAxis::kA;
  rec.bob_axis = axes.uniform() < p_b ? BobAxis::kZ : BobAxis::kB;
  auto outcomes = substream(seed, k, Substream::kOutcomes);
  const auto pair = sample_pair(
      spec.model, axis_angle(rec.alice_axis, rec.bob_axis, theta_a, theta_b),
      outcomes);
  rec.a = pair.a;
  rec.b = pair.b;
  return rec;
}

struct Tally {
  std::int64_t sum = 0;
  std::uint64_t count = 0;

  void add(int product) {
    sum += product;
    ++count;
  }

  CorrelationEstimate estimate() const {
    CorrelationEstimate e;
    e.count = count;
    if (count == 0) return e;
    const double c = static_cast<double>(sum) / static_cast<double>(count);
    e.value = c;
    e.std_error = std::sqrt(std::max(0.0, 1.0 - c * c) / count);
    return e;
  }
};

// dG/dx at a correlation x, from the slope of the branch that evaluates it.
double big_g_slope(const GFunction& g, double x) {
  const double theta = std::clamp(0.5 * kPi * (1.0 + x), 0.0, kPi);
  for (const auto& s : g.segments()) {
    if (s.contains(theta)) return 0.5 * kPi * s.slope();
  }
  return 0.0;
}

const char* axis_name(AliceAxis a) { return a == AliceAxis::kZ ? "Z" : "A"; }
const char* axis_name(BobAxis b) { return b == BobAxis::kZ ? "Z" : "B"; }

int parse_outcome(const json& j, const char* key, std::size_t line) {
  const int v = j.at(key).get<int>();
  if (v != 1 && v != -1) {
    throw Error(ErrorCode::kFormat,
                fmt::format("line {}: outcome '{}' must be -1 or +1", line, key));
  }
  return v;
}

}  // namespace

std::string spec_hash(const GameSpec& spec) {
  std::string text = describe_matrix(spec.matrix);
  text += '|';
  text += spec.g.name();
  for (const auto& [k, v] : spec.g.params()) text += fmt::format(";{}={}", k, v);
  for (const auto& s : spec.g.segments()) {
    text += fmt::format(";[{},{},{},{},{},{}]", s.lo, s.hi, s.lo_closed,
                        s.hi_closed, s.v_lo, s.v_hi);
  }
  text += '|';
  text += spec.model.name();
  return fmt::format("{:016x}", fnv1a(text));
}

RunLog play_runs(const GameSpec& spec, Angle theta_a, Angle theta_b,
                 std::uint64_t n, std::uint64_t seed, unsigned threads) {
  if (n == 0) throw Error(ErrorCode::kDomain, "number of runs must be >= 1");
  RunLog log;
  log.meta = {spec_hash(spec), theta_a.value(), theta_b.value(),
              spec.model.name(), seed, n};
  log.records.resize(n);

  const double p_a = StrategyMix(spec.g, theta_a).p;
  const double p_b = StrategyMix(spec.g, theta_b).p;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, n / 4096)));

  auto fill = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t k = begin; k < end; ++k) {
      log.records[k] = play_one(spec, p_a, p_b, theta_a, theta_b, seed, k);
    }
  };
  if (threads <= 1) {
    fill(0, n);
    return log;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t begin = t * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fill, begin, end);
  }
  for (auto& th : pool) th.join();
  return log;
}

std::pair<double, double> infer_strategies(const RunLog& log) {
  const auto n = log.records.size();
  if (n == 0) throw Error(ErrorCode::kDomain, "empty run log");
  std::uint64_t n_a = 0, n_b = 0;
  for (const auto& r : log.records) {
    n_a += r.alice_axis == AliceAxis::kA;
    n_b += r.bob_axis == BobAxis::kB;
  }
  return {static_cast<double>(n - n_a) / n, static_cast<double>(n - n_b) / n};
}

CorrelationEstimates estimate_correlations(const RunLog& log) {
  Tally ac, cb, ab, cc;
  for (const auto& r : log.records) {
    const int prod = r.a * r.b;
    const bool a_tilt = r.alice_axis == AliceAxis::kA;
    const bool b_tilt = r.bob_axis == BobAxis::kB;
    if (a_tilt && !b_tilt) ac.add(prod);
    else if (!a_tilt && b_tilt) cb.add(prod);
    else if (a_tilt && b_tilt) ab.add(prod);
    else cc.add(prod);
  }
  return {ac.estimate(), cb.estimate(), ab.estimate(), cc.estimate()};
}

SimulationResult settle(const RunLog& log, const Bimatrix2x2& m,
                        const GFunction& g) {
  SimulationResult res;
  std::tie(res.p_a, res.p_b) = infer_strategies(log);
  res.correlations = estimate_correlations(log);
  const auto& ac = res.correlations.ac;
  const auto& cb = res.correlations.cb;
  if (!ac.value || !cb.value) {
    throw Error(
        ErrorCode::kUndefinedCorrelation,
        fmt::format("no ({}) runs in the log, so <{}> is undefined; a pure "
                    "strategy never measures along its tilted axis, use the "
                    "analytic payoffs for pure strategies",
                    !ac.value ? "A,Z" : "Z,B", !ac.value ? "ac" : "cb"));
  }
  res.payoffs = correlation_payoff(m, g, *ac.value, *cb.value);

  const double q_a = g.big_g(*ac.value).value();
  const double q_b = g.big_g(*cb.value).value();
  auto at = [&](double x, double y) {
    return expected_payoff_classical(m, Probability(x), Probability(y));
  };
  const PayoffPair d_qa{at(1, q_b).a - at(0, q_b).a, at(1, q_b).b - at(0, q_b).b};
  const PayoffPair d_qb{at(q_a, 1).a - at(q_a, 0).a, at(q_a, 1).b - at(q_a, 0).b};
  const double s_a = big_g_slope(g, *ac.value) * ac.std_error;
  const double s_b = big_g_slope(g, *cb.value) * cb.std_error;
  res.payoff_std_error = {std::hypot(d_qa.a * s_a, d_qb.a * s_b),
                          std::hypot(d_qa.b * s_a, d_qb.b * s_b)};
  return res;
}

SimulationResult settle(const RunLog& log, const GameSpec& spec) {
  return settle(log, spec.matrix, spec.g);
}

CorrelationEstimate sample_kernel(const CorrelationModel& model, Angle theta,
                                  std::uint64_t n, std::uint64_t seed) {
  Tally t;
  for (std::uint64_t k = 0; k < n; ++k) {
    auto rng = substream(seed, k, Substream::kOutcomes);
    const auto pair = sample_pair(model, theta, rng);
    t.add(pair.a * pair.b);
  }
  return t.estimate();
}

void write_jsonl(std::ostream& out, const RunLog& log) {
  const json meta = {{"meta",
                      {{"spec_hash", log.meta.spec_hash},
                       {"theta_a", log.meta.theta_a},
                       {"theta_b", log.meta.theta_b},
                       {"model", log.meta.model},
                       {"seed", log.meta.seed},
                       {"n", log.meta.n}}}};
  out << meta.dump() << '\n';
  for (const auto& r : log.records) {
    out << fmt::format(
        "{{\"index\":{},\"alice_axis\":\"{}\",\"bob_axis\":\"{}\",\"a\":{},"
        "\"b\":{}}}\n",
        r.index, axis_name(r.alice_axis), axis_name(r.bob_axis), r.a, r.b);
  }
}

RunLog read_jsonl(std::istream& in) {
  RunLog log;
  std::string line;
  std::size_t line_no = 0;
  bool have_meta = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kFormat,
                  fmt::format("line {}: {}", line_no, e.what()));
    }
    try {
      if (!have_meta) {
        const auto& m = j.at("meta");
        log.meta = {m.at("spec_hash").get<std::string>(),
                    m.at("theta_a").get<double>(),
                    m.at("theta_b").get<double>(),
                    m.at("model").get<std::string>(),
                    m.at("seed").get<std::uint64_t>(),
                    m.at("n").get<std::uint64_t>()};
        have_meta = true;
        continue;
      }
      RunRecord r;
      r.index = j.at("index").get<std::uint64_t>();
      if (r.index != log.records.size()) {
        throw Error(ErrorCode::kFormat,
                    fmt::format("line {}: expected index {}, got {}", line_no,
                                log.records.size(), r.index));
      }
      const auto alice = j.at("alice_axis").get<std::string>();
      const auto bob = j.at("bob_axis").get<std::string>();
      if ((alice != "Z" && alice != "A") || (bob != "Z" && bob != "B")) {
        throw Error(ErrorCode::kFormat,
                    fmt::format("line {}: bad axis pair ({}, {})", line_no,
                                alice, bob));
      }
      r.alice_axis = alice == "Z" ? AliceAxis::kZ : AliceAxis::kA;
      r.bob_axis = bob == "Z" ? BobAxis::kZ : BobAxis::kB;
      r.a = parse_outcome(j, "a", line_no);
      r.b = parse_outcome(j, "b", line_no);
      log.records.push_back(r);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kFormat,
                  fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  if (!have_meta) throw Error(ErrorCode::kFormat, "run log has no meta line");
  if (log.records.size() != log.meta.n) {
    throw Error(ErrorCode::kFormat,
                fmt::format("run log declares {} records but holds {}",
                            log.meta.n, log.records.size()));
  }
  return log;
}

void write_csv(std::ostream& out, const RunLog& log) {
  out << "index,alice_axis,bob_axis,a,b\n";
  for (const auto& r : log.records) {
    out << fmt::format("{},{},{},{},{}\n", r.index, axis_name(r.alice_axis),
                       axis_name(r.bob_axis), r.a, r.b);
  }
}

}  // namespace corrgame
