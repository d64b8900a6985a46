#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "dyncon/runner.hpp"

namespace {

using dyncon::ConfigError;
using dyncon::Rational;

int64_t strict_ll(const std::string& s) {
  size_t used = 0;
  int64_t v = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

Rational parse_rational(const std::string& s) {
  try {
    size_t slash = s.find('/');
    int64_t num = strict_ll(slash == std::string::npos ? s : s.substr(0, slash));
    int64_t den = slash == std::string::npos ? 1 : strict_ll(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument(s);
    return Rational(num, den);
  } catch (const std::exception&) {
    throw ConfigError("expected a rational like 1/2, got '" + s + "'");
  }
}

dyncon::RunMode parse_mode(const std::string& s) {
  if (s == "subgraph") return dyncon::RunMode::Subgraph;
  if (s == "geom") return dyncon::RunMode::Geom;
  if (s == "subgraph-offline") return dyncon::RunMode::SubgraphOffline;
  if (s == "geom-offline") return dyncon::RunMode::GeomOffline;
  throw ConfigError("unknown mode '" + s + "'");
}

dyncon::Policy parse_policy(const std::string& s) {
  if (s == "classic") return dyncon::Policy::Classic;
  if (s == "degree") return dyncon::Policy::DegreeSensitive;
  throw ConfigError("unknown policy '" + s + "'");
}

dyncon::ProviderKind parse_provider(const std::string& s) {
  if (s == "boxes") return dyncon::ProviderKind::Boxes;
  if (s == "brute") return dyncon::ProviderKind::Brute;
  throw ConfigError("unknown provider '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic connectivity over vertex updates and geometric objects"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run a trace and print answers");
  std::string r_mode = "subgraph", r_policy = "classic", r_b = "1";
  std::string r_alpha = "147/500", r_provider = "boxes", r_trace = "-";
  std::string r_counters;
  uint64_t r_delta = 0, r_every = 100;
  bool r_check = false;
  run_cmd->add_option("--mode", r_mode,
                      "subgraph|geom|subgraph-offline|geom-offline");
  auto* opt_policy =
      run_cmd->add_option("--policy", r_policy, "classic|degree");
  auto* opt_delta =
      run_cmd->add_option("--delta", r_delta, "threshold override (positive)");
  auto* opt_b = run_cmd->add_option("--b", r_b, "geometric trade-off parameter");
  auto* opt_alpha =
      run_cmd->add_option("--alpha", r_alpha, "offline geometric exponent");
  auto* opt_provider =
      run_cmd->add_option("--provider", r_provider, "boxes|brute");
  run_cmd->add_flag("--check-oracle", r_check,
                    "verify every answer against the brute-force oracle");
  run_cmd->add_option("--counters-out", r_counters, "counters CSV path");
  run_cmd->add_option("--counters-every", r_every,
                      "ops between counter rows, 0 = final row only");
  run_cmd->add_option("trace", r_trace, "trace file, - for stdin");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "emit a deterministic trace");
  std::string g_mode = "subgraph", g_out = "-";
  dyncon::GenConfig gc;
  gen_cmd->add_option("--mode", g_mode, "subgraph|geom");
  gen_cmd->add_option("--n", gc.n, "vertices, or target live objects");
  gen_cmd->add_option("--ops", gc.ops, "number of events");
  gen_cmd->add_option("--seed", gc.seed, "PRNG seed");
  gen_cmd->add_option("--dim", gc.dim, "box dimension (geom)");
  gen_cmd->add_option("--mix", gc.mix,
                      "event-kind ratios in declaration order");
  gen_cmd->add_option("out", g_out, "output file, - for stdout");

  // params
  auto* par_cmd =
      app.add_subcommand("params", "print derived thresholds and exponents");
  std::string p_mode = "subgraph", p_b = "1", p_alpha = "147/500";
  uint64_t p_m = 0, p_n = 0;
  par_cmd->add_option("--mode", p_mode, "subgraph|geom|geom-offline");
  auto* opt_m = par_cmd->add_option("--m", p_m, "base graph edges (subgraph)");
  auto* opt_n = par_cmd->add_option("--n", p_n, "object count (geometric)");
  par_cmd->add_option("--b", p_b, "geometric trade-off parameter");
  par_cmd->add_option("--alpha", p_alpha, "offline geometric exponent");

  try {
    app.parse(argc, argv);

    if (app.got_subcommand(run_cmd)) {
      dyncon::RunConfig cfg;
      cfg.mode = parse_mode(r_mode);
      bool subgraph = cfg.mode == dyncon::RunMode::Subgraph ||
                      cfg.mode == dyncon::RunMode::SubgraphOffline;
      if (opt_policy->count() && !subgraph)
        throw ConfigError("--policy applies to subgraph modes");
      if (opt_b->count() && subgraph)
        throw ConfigError("--b applies to geometric modes");
      if (opt_provider->count() && subgraph)
        throw ConfigError("--provider applies to geometric modes");
      if (opt_alpha->count() && cfg.mode != dyncon::RunMode::GeomOffline)
        throw ConfigError("--alpha applies to geom-offline mode");
      if (opt_delta->count()) cfg.delta = r_delta;
      cfg.policy = parse_policy(r_policy);
      cfg.b = parse_rational(r_b);
      cfg.alpha = parse_rational(r_alpha);
      cfg.provider = parse_provider(r_provider);
      cfg.check_oracle = r_check;
      cfg.counters_out = r_counters;
      cfg.counters_every = r_every;
      if (r_trace == "-") {
        dyncon::run_trace(cfg, std::cin, std::cout);
      } else {
        std::ifstream f(r_trace);
        if (!f) throw ConfigError("cannot open trace file '" + r_trace + "'");
        dyncon::run_trace(cfg, f, std::cout);
      }
    } else if (app.got_subcommand(gen_cmd)) {
      if (g_mode == "subgraph")
        gc.mode = dyncon::TraceMode::Subgraph;
      else if (g_mode == "geom")
        gc.mode = dyncon::TraceMode::Geom;
      else
        throw ConfigError("unknown mode '" + g_mode + "'");
      std::string text = dyncon::gen_trace(gc);
      if (g_out == "-") {
        std::cout << text;
      } else {
        std::ofstream f(g_out);
        if (!f) throw ConfigError("cannot open output file '" + g_out + "'");
        f << text;
      }
    } else {
      if (p_mode == "subgraph") {
        if (!opt_m->count())
          throw ConfigError("subgraph params need --m");
        std::cout << dyncon::params_report_subgraph(p_m);
      } else if (p_mode == "geom") {
        if (!opt_n->count()) throw ConfigError("geometric params need --n");
        std::cout << dyncon::params_report_geom(p_n, parse_rational(p_b));
      } else if (p_mode == "geom-offline") {
        if (!opt_n->count()) throw ConfigError("geometric params need --n");
        std::cout << dyncon::params_report_geom_offline(
            p_n, parse_rational(p_b), parse_rational(p_alpha));
      } else {
        throw ConfigError("unknown mode '" + p_mode + "'");
      }
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  } catch (const dyncon::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const dyncon::OracleMismatch& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  }
}
