#include "codedxbar/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "codedxbar/conflict_graph.hpp"
#include "codedxbar/errors.hpp"
#include "codedxbar/rate_region.hpp"
#include "codedxbar/schedulers.hpp"
#include "codedxbar/simulator.hpp"
#include "codedxbar/traffic.hpp"

namespace codedxbar::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string pattern;
  std::string rates;
  std::string alpha = "1";
  std::string alphas = "0.6:1.5:0.1";
  std::string policy = "mwss-rand";
  std::string policies = "mwss-rand,uncoded-rand";
  long slots = 100000;
  std::uint64_t seed = 1;
  long delta = 1000;
  std::string epsilon = "0.005";
  int field = 256;
  int candidates = 10;
  std::size_t payload = 64;
  std::string arrivals = "saturated";
  std::string out;
  bool json = false;
  bool online = false;
  bool drain = false;
  std::vector<std::string> region;
};

json rational_list(const std::vector<Rational>& values) {
  json a = json::array();
  for (const auto& v : values) a.push_back(to_string(v));
  return a;
}

json pattern_json(const TrafficPattern& p, const RateVector& rates) {
  json flows = json::array();
  for (std::size_t f = 0; f < p.num_flows(); ++f)
    flows.push_back({{"input", p.flows()[f].input},
                     {"fanout", p.flows()[f].fanout},
                     {"rate", to_string(rates[f])}});
  return {{"inputs", p.num_inputs()}, {"outputs", p.num_outputs()}, {"flows", flows}};
}

// pattern and rates (scaled by alpha) from the options
std::pair<TrafficPattern, RateVector> load(const Options& o) {
  if (o.pattern.empty()) throw ParseError("--pattern is required");
  PatternSpec spec = resolve_pattern(o.pattern);
  RateVector rates;
  if (!o.rates.empty()) {
    std::string text = o.rates;
    if (std::filesystem::is_regular_file(o.rates)) {
      std::ifstream in(o.rates);
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    rates = parse_rate_list(text);
  } else if (spec.rates) {
    rates = *spec.rates;
  } else {
    throw ParseError("pattern has no rates; pass --rates");
  }
  if (rates.size() != spec.pattern.num_flows())
    throw ParseError("got " + std::to_string(rates.size()) + " rates for " +
                     std::to_string(spec.pattern.num_flows()) + " flows");
  const Rational alpha = parse_rational(o.alpha);
  if (alpha < 0) throw ParseError("--alpha must be nonnegative");
  return {spec.pattern, scale(rates, alpha)};
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw Error("cannot write '" + o.out + "'");
  file << text;
}

int analyze(const Options& o, std::ostream& out) {
  auto [pattern, rates] = load(o);
  const ConflictGraph graph = build_enhanced_conflict_graph(pattern);
  const auto weights = enhanced_rate_vector(pattern, rates);
  const Admissibility adm = is_admissible(pattern, rates);
  const auto stable_sets = enumerate_maximal_stable_sets(graph);
  const auto cliques = maximal_cliques(graph);
  const ColoringSolution sol = fractional_weighted_coloring(graph, weights);
  json coloring = json::array();
  for (const auto& t : sol.terms) coloring.push_back({to_string(t.weight), t.set.members()});
  json report = {
      {"pattern", pattern_json(pattern, rates)},
      {"graph",
       {{"vertices", graph.size()},
        {"edges", graph.num_edges()},
        {"maximal_stable_sets", stable_sets.size()},
        {"maximal_cliques", cliques.size()}}},
      {"admissible", adm.admissible},
      {"input_loads", rational_list(adm.input_loads)},
      {"output_loads", rational_list(adm.output_loads)},
      {"split", is_split_graph(graph)},
      {"perfect", is_perfect(graph)},
      {"chi_f", to_string(sol.value)},
      {"in_region", sol.value <= 1},
      {"speedup", to_string(sol.value)},
      {"coloring", coloring},
  };
  emit(o, out, report.dump(2) + "\n");
  return kOk;
}

std::string slot_table(const TrafficPattern& pattern, const ScheduleFrame& frame) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"slot"};
  for (int i = 0; i < pattern.num_inputs(); ++i) header.push_back("input " + std::to_string(i + 1));
  rows.push_back(header);
  for (std::size_t t = 0; t < frame.slots.size(); ++t) {
    std::vector<std::string> row{std::to_string(t + 1)};
    row.resize(header.size(), "-");
    for (const auto& [f, subflows] : group_by_flow(pattern, frame.slots[t])) {
      std::string outputs;
      for (int s : subflows) {
        if (!outputs.empty()) outputs += ",";
        outputs += std::to_string(pattern.subflows()[static_cast<std::size_t>(s)].output + 1);
      }
      const int input = pattern.flows()[static_cast<std::size_t>(f)].input;
      row[static_cast<std::size_t>(input) + 1] =
          pattern.describe_flow(static_cast<std::size_t>(f)) + " -> " + outputs;
    }
    rows.push_back(row);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream s;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      s << r[c];
      if (c + 1 < r.size()) s << std::string(width[c] - r[c].size() + 2, ' ');
    }
    s << "\n";
  }
  return s.str();
}

int schedule(const Options& o, std::ostream& out, std::ostream& err) {
  auto [pattern, rates] = load(o);
  ScheduleFrame frame;
  try {
    frame = build_offline_schedule(pattern, rates);
  } catch (const RegionError& e) {
    err << "out of region: chi_f = " << e.witness() << "\n";
    return kOutOfRegion;
  }
  json doc = to_json(frame);
  doc["chi_f"] = to_string(fractional_weighted_coloring(build_enhanced_conflict_graph(pattern),
                                                        enhanced_rate_vector(pattern, rates))
                               .value);
  std::string text = doc.dump(2) + "\n";
  if (!o.json) text += "\n" + slot_table(pattern, frame);
  emit(o, out, text);
  return kOk;
}

SimConfig sim_config(const Options& o, const TrafficPattern& pattern, const RateVector& rates) {
  SimConfig c;
  c.pattern = pattern;
  c.rates = rates;
  c.alpha = parse_rational(o.alpha);
  c.seed = seed_from_env(o.seed);
  c.slots = o.slots;
  c.delta = o.delta;
  c.epsilon = parse_rational(o.epsilon);
  c.field_order = o.field;
  c.candidates = o.candidates;
  c.payload_length = o.payload;
  c.drain = o.drain;
  if (o.arrivals != "saturated" && o.arrivals != "bernoulli")
    throw ParseError("--arrivals must be saturated or bernoulli");
  c.saturated = o.arrivals == "saturated";
  return c;
}

json metrics_json(const Metrics& m) {
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  return {{"slots", m.slots},
          {"mean_delay", num(m.mean_delay)},
          {"p95_delay", num(m.p95_delay)},
          {"mean_backlog", m.mean_backlog},
          {"backlog_slope", m.backlog_slope},
          {"stable", m.stable},
          {"decode_failures", m.decode_failures},
          {"throughput_per_flow", m.throughput_per_flow},
          {"arrivals", m.arrivals},
          {"delivered", m.delivered},
          {"decoded", m.decoded},
          {"batches_flushed", m.batches_flushed},
          {"idle_slots", m.idle_slots},
          {"idle_after_busy", m.idle_after_busy},
          {"busy_periods", m.busy_periods.size()},
          {"conservation_violations", m.conservation_violations},
          {"invalid_configurations", m.invalid_configurations}};
}

int simulate_cmd(const Options& o, std::ostream& out) {
  auto [pattern, rates] = load(o);
  SimConfig c = sim_config(o, pattern, rates);
  c.policy = o.policy;
  c.mode = default_mode(o.policy);
  if (o.online && c.mode == SimMode::kFiniteHorizon) c.mode = SimMode::kOnline;
  const SweepRow row{c.alpha, c.policy, c.seed, simulate(c)};
  if (o.json) {
    json doc = metrics_json(row.metrics);
    doc["alpha"] = to_string(row.alpha);
    doc["policy"] = row.policy;
    doc["seed"] = row.seed;
    emit(o, out, doc.dump(2) + "\n");
  } else {
    emit(o, out, csv_header() + "\n" + csv_row(row) + "\n");
  }
  return row.metrics.decode_failures > 0 ? kDecodeFailure : kOk;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream s(text);
  for (std::string item; std::getline(s, item, ',');)
    if (!item.empty()) items.push_back(item);
  return items;
}

int sweep_cmd(const Options& o, std::ostream& out) {
  auto [pattern, rates] = load(o);
  SimConfig base = sim_config(o, pattern, rates);
  const auto policies = split_list(o.policies);
  for (const auto& p : policies)
    if (!is_known_policy(p)) throw ParseError("unknown policy '" + p + "'");
  const auto rows = sweep(base, parse_alpha_range(o.alphas), policies, o.online);
  std::string text = csv_header() + "\n";
  bool failed = false;
  for (const auto& r : rows) {
    text += csv_row(r) + "\n";
    failed = failed || r.metrics.decode_failures > 0;
  }
  emit(o, out, text);
  return failed ? kDecodeFailure : kOk;
}

int region_cmd(const Options& o, std::ostream& out) {
  if (o.region.size() < 2) throw ParseError("--2xN needs N followed by r0 r1 .. rN");
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(o.region[0], &used);
    if (used != o.region[0].size()) throw std::invalid_argument("N");
  } catch (const std::exception&) {
    throw ParseError("N must be an integer, got '" + o.region[0] + "'");
  }
  if (n < 1) throw ParseError("N must be at least 1");
  if (o.region.size() != static_cast<std::size_t>(n) + 2)
    throw ParseError("--2xN " + std::to_string(n) + " needs " + std::to_string(n + 1) + " rates");
  const Rational r0 = parse_rational(o.region[1]);
  std::vector<Rational> unicasts;
  for (std::size_t i = 2; i < o.region.size(); ++i) unicasts.push_back(parse_rational(o.region[i]));
  const UncodedCheck check = uncoded_2xN_check(n, r0, unicasts);
  const auto p = pattern_2xN(n, r0, unicasts);
  const Rational coded = min_speedup(p.pattern, p.rates);

  if (o.json) {
    json ineq = json::array();
    for (const auto& q : check.inequalities)
      ineq.push_back({{"label", q.label}, {"lhs", to_string(q.lhs)}, {"rhs", to_string(q.rhs)},
                      {"holds", q.holds()}});
    json doc = {{"inequalities", ineq},
                {"uncoded_feasible", check.feasible},
                {"uncoded_scale", to_string(check.min_scale)},
                {"coded_speedup", to_string(coded)}};
    emit(o, out, doc.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream s;
  for (const auto& q : check.inequalities)
    s << q.label << ": " << to_string(q.lhs) << (q.holds() ? " <= " : " > ") << to_string(q.rhs)
      << "\n";
  s << "uncoded scale: " << to_string(check.min_scale) << "\n";
  s << "coded speedup: " << to_string(coded) << "\n";
  emit(o, out, s.str());
  return kOk;
}

}  // namespace

PatternSpec resolve_pattern(const std::string& source) {
  auto with_rates = [](PatternWithRates p) { return PatternSpec{p.pattern, p.rates}; };
  if (source == "fig1") return with_rates(pattern_fig1());
  if (source == "sim4x3") return with_rates(pattern_4x3_sim(1));
  if (source == "2xN") return with_rates(pattern_2xN_vertex(3));
  if (source.rfind("2xN:", 0) == 0) {
    const std::string n = source.substr(4);
    if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos || n.size() > 3)
      throw ParseError("bad builtin '" + source + "'; expected 2xN:<N>");
    return with_rates(pattern_2xN_vertex(std::stoi(n)));
  }
  return load_pattern(source);
}

std::vector<Rational> parse_alpha_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? first : text.find(':', first + 1);
  if (second == std::string::npos) {
    std::vector<Rational> values;
    for (const auto& item : split_list(text)) values.push_back(parse_rational(item));
    if (values.empty()) throw ParseError("empty alpha list");
    return values;
  }
  const Rational a = parse_rational(text.substr(0, first));
  const Rational b = parse_rational(text.substr(first + 1, second - first - 1));
  const Rational step = parse_rational(text.substr(second + 1));
  if (step <= 0) throw ParseError("alpha step must be positive");
  if (b < a) throw ParseError("alpha range is empty");
  std::vector<Rational> values;
  for (Rational v = a; v <= b; v += step) values.push_back(v);
  return values;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crossbar multicast scheduling with intra-flow network coding", "codedxbar"};
  app.require_subcommand(1);
  Options o;

  auto add_pattern = [&](CLI::App* cmd) {
    cmd->add_option("--pattern", o.pattern, "pattern file or builtin: fig1, 2xN, 2xN:<N>, sim4x3")
        ->required();
    cmd->add_option("--rates", o.rates, "rates inline (2/3,1/3) or a file holding a JSON array");
    cmd->add_option("--alpha", o.alpha, "load multiplier applied to the rates (exact)");
  };
  auto add_sim = [&](CLI::App* cmd) {
    cmd->add_option("--slots", o.slots, "horizon in slots")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "master seed (CODEDXBAR_SEED overrides)");
    cmd->add_option("--delta", o.delta, "finite-horizon frame length")->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", o.epsilon, "finite-horizon slack");
    cmd->add_option("--field", o.field, "field order")->check(CLI::IsMember({2, 16, 256}));
    cmd->add_option("--candidates", o.candidates, "random candidates per slot")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--payload", o.payload, "payload bytes per packet")->check(CLI::PositiveNumber);
    cmd->add_option("--arrivals", o.arrivals, "offline arrivals: saturated or bernoulli");
    cmd->add_flag("--online", o.online, "run coded policies without batching");
    cmd->add_flag("--drain", o.drain, "finish queued batches after the horizon");
    cmd->add_option("--out", o.out, "write output to a file");
    cmd->add_flag("--json", o.json, "JSON output");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "conflict graph and rate region report");
  add_pattern(analyze_cmd);
  analyze_cmd->add_option("--out", o.out, "write output to a file");
  analyze_cmd->add_flag("--json", o.json, "JSON output (always on)");

  auto* schedule_cmd = app.add_subcommand("schedule", "offline frame schedule");
  add_pattern(schedule_cmd);
  schedule_cmd->add_option("--out", o.out, "write output to a file");
  schedule_cmd->add_flag("--json", o.json, "JSON only, no slot table");

  auto* simulate = app.add_subcommand("simulate", "one simulation run, CSV");
  add_pattern(simulate);
  add_sim(simulate);
  simulate->add_option("--policy", o.policy, "mwss, mwss-rand, offline or uncoded-rand")
      ->check(CLI::IsMember({"mwss", "mwss-rand", "offline", "uncoded-rand"}));

  auto* sweep = app.add_subcommand("sweep", "load sweep, CSV");
  add_pattern(sweep);
  add_sim(sweep);
  sweep->add_option("--alphas", o.alphas, "a:b:step or a comma list");
  sweep->add_option("--policies", o.policies, "comma-separated policies");

  auto* region = app.add_subcommand("region", "2xN inequalities with and without coding");
  region->add_option("--2xN", o.region, "N r0 r1 .. rN")->expected(2, -1)->required();
  region->add_option("--out", o.out, "write output to a file");
  region->add_flag("--json", o.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*analyze_cmd) return analyze(o, out);
    if (*schedule_cmd) return schedule(o, out, err);
    if (*simulate) return simulate_cmd(o, out);
    if (*sweep) return sweep_cmd(o, out);
    if (*region) return region_cmd(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const SizeCapError& e) {
    err << "error: " << e.what() << "\n";
    return kSizeCap;
  } catch (const RegionError& e) {
    err << "error: " << e.what() << "\n";
    return kOutOfRegion;
  } catch (const CodingFailure& e) {
    err << "error: " << e.what() << "\n";
    return kDecodeFailure;
  } catch (const IntegrityError& e) {
    err << "error: " << e.what() << "\n";
    return kDecodeFailure;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace codedxbar::cli
