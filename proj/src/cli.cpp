#include "qdisc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qdisc/discrim.hpp"
#include "qdisc/verify.hpp"

namespace qdisc {

namespace {

using json = nlohmann::ordered_json;

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  if (!std::isfinite(v)) throw ValidationError("non-finite value in output");
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// nlohmann's own dump prints shortest round-trip floats; output here always
// carries 17 significant digits.
void write_json(std::ostream& os, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(k).dump() << ": ";
        write_json(os, v, indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      if (std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); })) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i > 0) os << ", ";
          write_json(os, j[i], indent + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << ",\n";
        os << inner;
        write_json(os, j[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string to_json_text(const json& j) {
  std::ostringstream os;
  write_json(os, j, 0);
  os << "\n";
  return os.str();
}

json header(std::string_view command) {
  json j = json::object();
  j["schema_version"] = kSchemaVersion;
  j["tool"] = std::string(kToolName);
  j["version"] = std::string(kToolVersion);
  j["command"] = std::string(command);
  return j;
}

json to_json(const DiscrimParams& p) {
  return json{{"alpha", p.alpha()},         {"beta", p.beta()},         {"gamma1", p.gamma1()},
              {"gamma2", p.gamma2()},       {"gamma_m", p.gamma_min()}, {"gamma_M", p.gamma_max()},
              {"P", p.dominant()}};
}

json to_json(const DistanceResult& r) {
  return json{{"value", r.value},
              {"arg", r.arg},
              {"branch", std::string(to_string(r.branch))},
              {"scan_resolution", r.scan_resolution}};
}

json to_json(const Classification& c) {
  json margins = json::array();
  for (const Margin& m : c.margins) margins.push_back(json{{"test", m.test}, {"slack", m.slack}});
  return json{{"useful", c.useful}, {"node", c.node}, {"boundary", c.boundary}, {"margins", margins}};
}

json to_json(const VerifyReport& r) {
  json failures = json::array();
  for (const SampleRecord& s : r.failures) {
    json values = json::object();
    for (const auto& [k, v] : s.values) values[k] = v;
    failures.push_back(json{{"channel1", s.channel1}, {"channel2", s.channel2}, {"values", values}});
  }
  return json{{"mode", r.mode},           {"samples", r.samples},     {"tolerance", r.tolerance},
              {"checked", r.checked},     {"skipped", r.skipped},     {"max_deviation", r.max_deviation},
              {"passed", r.passed()},     {"failures", failures}};
}

json to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json probe_json(const Probe& probe) {
  json amps = json::array();
  if (const auto* p2 = std::get_if<PureState2>(&probe)) {
    amps.push_back(to_json(p2->a0()));
    amps.push_back(to_json(p2->a1()));
  } else {
    for (const Complex& a : std::get<PureState4>(probe).amplitudes()) amps.push_back(to_json(a));
  }
  return json{{"dim", amps.size() == 2 ? 2 : 4}, {"amplitudes", amps}};
}

// Writes to --out when given, to `out` otherwise.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file: " + path);
  f << text;
  if (!f) throw ValidationError("failed writing output file: " + path);
}

std::pair<QubitChannel, QubitChannel> parse_pair(const std::vector<std::string>& literals) {
  if (literals.size() != 2) throw ValidationError("expected exactly two channel literals");
  return {parse_channel(literals[0]), parse_channel(literals[1])};
}

json inputs_json(const std::vector<std::string>& literals) {
  return json{{"channel1", literals.at(0)}, {"channel2", literals.at(1)}};
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ParseError("invalid number '" + std::string(text) + "' in " + std::string(what));
  }
  return v;
}

// --- probes ---------------------------------------------------------------

std::pair<double, double> probe_args(std::string_view literal, std::string_view name) {
  const std::string_view body = literal.substr(name.size() + 1, literal.size() - name.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string_view::npos) throw ParseError("probe '" + std::string(literal) + "' needs two arguments");
  const double s = parse_number(body.substr(0, comma), literal);
  const double phase = parse_number(body.substr(comma + 1), literal);
  if (s < 0.0 || s > 1.0) throw ParseError("probe weight '" + std::string(body.substr(0, comma)) + "' is outside [0, 1]");
  return {s, phase};
}

bool has_call_form(std::string_view literal, std::string_view name) {
  return literal.size() > name.size() + 1 && literal.substr(0, name.size()) == name &&
         literal[name.size()] == '(' && literal.back() == ')';
}

// --- sweeps ---------------------------------------------------------------

constexpr std::array<std::string_view, 10> kSweepParams = {"phi1",  "theta1", "phi2",  "theta2",  "lambda1",
                                                           "lambda2", "phi1p", "theta1p", "phi2p", "theta2p"};

bool is_lambda(std::string_view name) { return name.substr(0, 6) == "lambda"; }

struct Axis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;
  double at(int k) const { return k == steps - 1 ? stop : start + (stop - start) * k / (steps - 1); }
};

struct SweepSpec {
  std::vector<Axis> axes;
  std::map<std::string, double> fixed;
  std::map<std::string, std::string> tied;
};

void require_range(std::string_view name, double v) {
  const double hi = is_lambda(name) ? 1.0 : std::numbers::pi;
  if (v < 0.0 || v > hi + 1e-12) {
    throw ValidationError("value " + format_double(v) + " for '" + std::string(name) + "' is out of range");
  }
}

SweepSpec parse_sweep(const std::vector<std::string>& tokens) {
  SweepSpec spec;
  auto known = [](std::string_view n) {
    return std::find(kSweepParams.begin(), kSweepParams.end(), n) != kSweepParams.end();
  };
  std::map<std::string, bool> seen;
  for (const std::string& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("sweep term '" + tok + "' is not name=value");
    const std::string name = tok.substr(0, eq);
    const std::string value = tok.substr(eq + 1);
    if (!known(name)) throw ParseError("unknown sweep parameter '" + name + "'");
    if (seen[name]) throw ValidationError("sweep parameter '" + name + "' given twice");
    seen[name] = true;

    if (value.find(':') != std::string::npos) {
      const auto c1 = value.find(':');
      const auto c2 = value.find(':', c1 + 1);
      if (c2 == std::string::npos) throw ParseError("axis '" + tok + "' must be name=start:stop:steps");
      Axis a;
      a.name = name;
      a.start = parse_number(std::string_view(value).substr(0, c1), tok);
      a.stop = parse_number(std::string_view(value).substr(c1 + 1, c2 - c1 - 1), tok);
      const double steps = parse_number(std::string_view(value).substr(c2 + 1), tok);
      if (steps != std::floor(steps) || steps < 2 || steps > 1e6) {
        throw ValidationError("axis '" + name + "' needs an integer step count >= 2");
      }
      a.steps = static_cast<int>(steps);
      require_range(name, a.start);
      require_range(name, a.stop);
      spec.axes.push_back(a);
    } else if (known(value)) {
      if (is_lambda(name) != is_lambda(value)) throw ValidationError("cannot tie '" + name + "' to '" + value + "'");
      spec.tied[name] = value;
    } else {
      const double v = parse_number(value, tok);
      require_range(name, v);
      spec.fixed[name] = v;
    }
  }
  if (spec.axes.empty() || spec.axes.size() > 2) throw ValidationError("a sweep needs one or two axes");
  for (const auto& [name, target] : spec.tied) {
    if (spec.tied.count(target) != 0) throw ValidationError("'" + name + "' is tied to another tied parameter");
  }
  return spec;
}

std::pair<QubitChannel, QubitChannel> sweep_channels(const SweepSpec& spec, const std::vector<double>& axis_values) {
  std::map<std::string, double> v;
  for (std::string_view n : kSweepParams) v[std::string(n)] = is_lambda(n) ? 1.0 : 0.0;
  for (const auto& [n, x] : spec.fixed) v[n] = x;
  for (std::size_t i = 0; i < spec.axes.size(); ++i) v[spec.axes[i].name] = axis_values[i];
  for (const auto& [n, target] : spec.tied) v[n] = v[target];
  auto clamp_angle = [](double a) { return std::min(a, std::numbers::pi); };
  auto channel = [&](const std::string& k) {
    return QubitChannel(v["lambda" + k], ExtremalChannel(clamp_angle(v["phi" + k]), clamp_angle(v["theta" + k])),
                        ExtremalChannel(clamp_angle(v["phi" + k + "p"]), clamp_angle(v["theta" + k + "p"])));
  };
  return {channel("1"), channel("2")};
}

std::string run_sweep(const SweepSpec& spec) {
  std::ostringstream os;
  os << "# schema_version: " << kSchemaVersion << ", tool: " << kToolName << " " << kToolVersion << ", axes:";
  for (const Axis& a : spec.axes) os << " " << a.name;
  os << "\n";
  os << "axis1,axis2,alpha,beta,gamma1,gamma2,useful,node,boundary,single_dist,entangled_dist,gap\n";
  const Axis& first = spec.axes[0];
  const int second_steps = spec.axes.size() == 2 ? spec.axes[1].steps : 1;
  for (int i = 0; i < first.steps; ++i) {
    for (int j = 0; j < second_steps; ++j) {
      std::vector<double> values{first.at(i)};
      if (spec.axes.size() == 2) values.push_back(spec.axes[1].at(j));
      const auto [c1, c2] = sweep_channels(spec, values);
      const DiscrimParams p = compute_params(c1, c2);
      const Classification cls = classify(c1, c2);
      const double single = max_distance_single(p).value;
      const double entangled = max_distance_entangled(p).value;
      os << format_double(values[0]) << "," << (values.size() == 2 ? format_double(values[1]) : "") << ","
         << format_double(p.alpha()) << "," << format_double(p.beta()) << "," << format_double(p.gamma1()) << ","
         << format_double(p.gamma2()) << "," << (cls.useful ? "true" : "false") << "," << cls.node << ","
         << (cls.boundary ? "true" : "false") << "," << format_double(single) << "," << format_double(entangled)
         << "," << format_double(entangled - single) << "\n";
    }
  }
  return os.str();
}

// --- commands -------------------------------------------------------------

struct Options {
  std::vector<std::string> channels;
  std::vector<std::string> sweep_terms;
  std::string probe;
  std::string out;
  std::string mode = "lemma1";
  std::uint64_t seed = 42;
  int samples = 100;
  long long trials = 100000;
  long long verify_trials = 1000000;
  bool optimal = false;
  int grid = 0;
};

SearchConfig search_config(const Options& o) {
  SearchConfig cfg;
  cfg.rng_seed = o.seed;
  if (o.grid != 0) cfg.grid_points = o.grid;
  cfg.validate();
  return cfg;
}

int cmd_params(const Options& o, std::ostream& out) {
  const auto [c1, c2] = parse_pair(o.channels);
  json j = header("params");
  j["inputs"] = inputs_json(o.channels);
  j["params"] = to_json(compute_params(c1, c2));
  emit(to_json_text(j), o.out, out);
  return exit_code::ok;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const auto [c1, c2] = parse_pair(o.channels);
  const DiscrimParams p = compute_params(c1, c2);
  const DistanceResult single = max_distance_single(p);
  const DistanceResult entangled = max_distance_entangled(p);
  json j = header("classify");
  j["inputs"] = inputs_json(o.channels);
  j["params"] = to_json(p);
  j["classification"] = to_json(classify(c1, c2));
  j["single"] = to_json(single);
  j["entangled"] = to_json(entangled);
  j["success_probability"] = json{{"single", success_probability(single.value)},
                                  {"entangled", success_probability(entangled.value)}};
  if (o.grid != 0) {
    const SearchConfig cfg = search_config(o);
    j["seed"] = o.seed;
    j["rng"] = std::string(kRngName);
    j["oracle"] = json{{"grid_points", cfg.grid_points},
                       {"single", to_json(brute_max_single(c1, c2, cfg).distance)},
                       {"entangled", to_json(brute_max_entangled(c1, c2, cfg).distance)}};
  }
  emit(to_json_text(j), o.out, out);
  return exit_code::ok;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const SweepSpec spec = parse_sweep(o.sweep_terms);
  emit(run_sweep(spec), o.out, out);
  return exit_code::ok;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.samples < 1) throw ValidationError("--samples must be >= 1");
  if (o.verify_trials < 1) throw ValidationError("--trials must be >= 1");
  const SearchConfig cfg = search_config(o);
  VerifyReport rep;
  if (o.mode == "lemma1") {
    rep = verify_lemma1(o.samples, o.seed, cfg);
  } else if (o.mode == "lemma2") {
    rep = verify_lemma2(o.samples, o.seed, cfg);
  } else if (o.mode == "tree") {
    rep = verify_tree(o.samples, o.seed, cfg);
  } else if (o.mode == "montecarlo") {
    rep = verify_montecarlo(o.samples, o.seed, o.verify_trials, cfg);
  } else {
    throw ValidationError("unknown --mode '" + o.mode + "' (lemma1, lemma2, tree, montecarlo)");
  }
  json j = header("verify");
  j["seed"] = o.seed;
  j["rng"] = std::string(kRngName);
  j["grid_points"] = cfg.grid_points;
  if (o.mode == "montecarlo") j["trials"] = o.verify_trials;
  j["report"] = to_json(rep);
  emit(to_json_text(j), o.out, out);
  return rep.passed() ? exit_code::ok : exit_code::verification_failed;
}

int cmd_simulate(Options o, std::ostream& out) {
  if (o.channels.size() == 3) {
    o.probe = o.channels[2];
    o.channels.pop_back();
  }
  const auto [c1, c2] = parse_pair(o.channels);
  if (o.optimal == !o.probe.empty()) throw ValidationError("give either a probe literal or --optimal");
  if (o.trials < 1) throw ValidationError("--trials must be >= 1");
  const Probe probe =
      o.optimal ? Probe(brute_max_entangled(c1, c2, search_config(o), EntangledSearch::Restricted).probe)
                : parse_probe(o.probe);
  const Matrix delta = std::visit(
      [&](const auto& psi) {
        if constexpr (std::is_same_v<std::decay_t<decltype(psi)>, PureState2>) {
          return delta_single(c1, c2, psi);
        } else {
          return delta_entangled(c1, c2, psi);
        }
      },
      probe);
  const Measurement m = helstrom(delta);
  const double empirical = simulate(c1, c2, probe, m, o.trials, o.seed);
  const double distance = trace_norm(delta);
  const double theoretical = success_probability(std::min(distance, 2.0));
  const double sigma = binomial_sigma(theoretical, o.trials);
  const double z = sigma > 0.0 ? (empirical - theoretical) / sigma : 0.0;

  json j = header("simulate");
  j["inputs"] = inputs_json(o.channels);
  j["inputs"]["probe"] = o.optimal ? std::string("optimal") : o.probe;
  j["seed"] = o.seed;
  j["rng"] = std::string(kRngName);
  j["trials"] = o.trials;
  j["probe"] = probe_json(probe);
  j["trace_distance"] = distance;
  j["empirical_success"] = empirical;
  j["theoretical_success"] = theoretical;
  j["sigma"] = sigma;
  j["z_score"] = z;
  emit(to_json_text(j), o.out, out);
  return exit_code::ok;
}

}  // namespace

Probe parse_probe(std::string_view literal) {
  if (literal == "|0>") return PureState2(1.0, 0.0);
  if (literal == "|1>") return PureState2(0.0, 1.0);
  const double r = std::sqrt(0.5);
  if (literal == "|+>") return PureState2(r, r);
  if (literal == "|->") return PureState2(r, -r);
  if (has_call_form(literal, "single")) {
    const auto [s, phase] = probe_args(literal, "single");
    return PureState2(std::sqrt(1.0 - s), std::polar(std::sqrt(s), phase));
  }
  if (has_call_form(literal, "schmidt")) {
    const auto [s, phase] = probe_args(literal, "schmidt");
    return PureState4::schmidt(std::sqrt(1.0 - s), std::polar(std::sqrt(s), phase));
  }
  throw ParseError("unrecognized probe literal '" + std::string(literal) + "'");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qubit channel discrimination with and without side entanglement", std::string(kToolName)};
  app.require_subcommand(1);
  Options o;

  auto add_channels = [&](CLI::App* sub) {
    sub->add_option("channels", o.channels, "Two channel literals")->expected(2)->required();
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Write output to this file"); };

  CLI::App* params = app.add_subcommand("params", "Print the discrimination parameters of a channel pair");
  add_channels(params);
  add_out(params);

  CLI::App* classify_cmd = app.add_subcommand("classify", "Closed-form distances and the entanglement verdict");
  add_channels(classify_cmd);
  add_out(classify_cmd);
  classify_cmd->add_option("--grid", o.grid, "Also run the brute-force oracle with this many grid points per axis");
  classify_cmd->add_option("--seed", o.seed, "Oracle seed");

  CLI::App* sweep = app.add_subcommand("sweep", "Classify a one- or two-axis parameter grid into CSV");
  sweep->add_option("terms", o.sweep_terms, "name=start:stop:steps axes, name=value or name=other fixed terms")
      ->required();
  add_out(sweep);

  CLI::App* verify = app.add_subcommand("verify", "Check closed forms against the brute-force oracle");
  verify->add_option("--mode", o.mode, "lemma1, lemma2, tree or montecarlo");
  verify->add_option("--samples", o.samples, "Number of samples");
  verify->add_option("--seed", o.seed, "Sampling seed");
  verify->add_option("--grid", o.grid, "Oracle grid points per axis");
  verify->add_option("--trials", o.verify_trials, "Monte-Carlo trials per sample");
  add_out(verify);

  CLI::App* sim = app.add_subcommand("simulate", "Monte-Carlo discrimination with the Helstrom measurement");
  sim->add_option("inputs", o.channels, "Two channel literals, then a probe literal unless --optimal")
      ->expected(2, 3)
      ->required();
  sim->add_flag("--optimal", o.optimal, "Use the oracle's optimal entangled probe");
  sim->add_option("--trials", o.trials, "Number of trials");
  sim->add_option("--seed", o.seed, "Sampling seed");
  sim->add_option("--grid", o.grid, "Oracle grid points per axis for --optimal");
  add_out(sim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::invalid;
  }

  try {
    if (params->parsed()) return cmd_params(o, out);
    if (classify_cmd->parsed()) return cmd_classify(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    return cmd_simulate(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::invalid;
  }
}

}  // namespace qdisc
