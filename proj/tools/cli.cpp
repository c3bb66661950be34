#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bcsdn/conformance.hpp"
#include "bcsdn/conformance_io.hpp"
#include "bcsdn/economics.hpp"
#include "bcsdn/simnet/scenario_io.hpp"
#include "bcsdn/simnet/simnet.hpp"
#include "bcsdn/sweep.hpp"
#include "svg.hpp"

namespace bcsdn::cli {

namespace ec = economics;
namespace cf = conformance;
namespace sn = simnet;
namespace fs = std::filesystem;

std::string format_number(double v, int precision) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  return fmt::format("{:.{}g}", v, precision);
}

namespace {

struct EconFlags {
  ec::EconParams params;

  void attach(CLI::App& cmd) {
    cmd.add_option("--p", params.p, "probability of the complex plan")->capture_default_str();
    cmd.add_option("--eps", params.epsilon, "simple/complex blocksize ratio")->capture_default_str();
    cmd.add_option("--alpha", params.alpha, "verifier cost factor")->capture_default_str();
    cmd.add_option("--beta", params.beta, "initiator income factor")->capture_default_str();
    cmd.add_option("--sigma", params.sigma, "reservation utility")->capture_default_str();
    cmd.add_option("--smax", params.s_max, "maximum blocksize")->capture_default_str();
  }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("--out: cannot write {}", path.string()));
  f << content;
  f.flush();
  if (!f) throw InputError(fmt::format("--out: failed writing {}", path.string()));
}

std::vector<double> parse_grid(const std::string& text) {
  auto number = [](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InputError(fmt::format("--grid: '{}' is not a number", s));
    }
  };
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    // lo:step:hi
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw InputError("--grid: range form is lo:step:hi");
    const double lo = number(parts[0]), step = number(parts[1]), hi = number(parts[2]);
    if (!(step > 0) || hi < lo) throw InputError("--grid: range needs step > 0 and hi >= lo");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (n > 1'000'000) throw InputError("--grid: too many points");
    for (std::size_t i = 0; i < n; ++i) grid.push_back(lo + step * static_cast<double>(i));
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) grid.push_back(number(part));
  }
  if (grid.empty()) throw InputError("--grid: no values");
  return grid;
}

std::vector<ec::Mechanism> parse_mechanisms(const std::string& text) {
  if (text == "both" || text == "all") return {ec::Mechanism::contract, ec::Mechanism::stackelberg};
  std::vector<ec::Mechanism> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    auto m = ec::parse_mechanism(part);
    if (!m) throw InputError(fmt::format("--mechanism: unknown mechanism '{}'", part));
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw InputError("--mechanism: no mechanism given");
  return out;
}

int cmd_optimal(const ec::EconParams& params, int precision, std::ostream& out) {
  params.validate();
  const auto c = ec::optimal_contract(params);
  const auto sb = ec::stackelberg_benchmark(params.alpha, params.beta);
  auto num = [&](double v) { return format_number(v, precision); };
  out << "A " << num(c.A) << '\n'
      << "r* " << num(c.r_star) << '\n'
      << "s* " << num(c.s_star) << (c.clamped ? " (clamped to smax)" : "") << '\n'
      << "s_simple " << num(c.s_small) << '\n'
      << "expected_verifier_utility " << num(c.expected_verifier_utility) << '\n'
      << "expected_vi_utility " << num(c.expected_vi_utility) << '\n'
      << "expected_welfare " << num(c.expected_social_welfare) << '\n'
      << "participation " << (c.participation_ok ? "ok" : "fails") << " (sigma " << num(params.sigma) << ")\n"
      << "stackelberg_r " << num(sb.r_sb) << '\n'
      << "stackelberg_s " << num(sb.s_sb) << '\n'
      << "stackelberg_welfare " << num(sb.welfare_sb) << '\n';
  return ok;
}

int cmd_sweep(const ec::EconParams& fixed, const std::string& vary_text, const std::optional<std::string>& grid_text,
              const std::string& mechanism_text, const std::optional<std::string>& out_path, bool svg, int precision,
              std::ostream& out) {
  const auto vary = ec::parse_sweep_variable(vary_text);
  if (!vary) throw InputError(fmt::format("--vary: unknown parameter '{}'", vary_text));
  const auto grid = grid_text ? parse_grid(*grid_text) : ec::default_grid(*vary);
  const auto mechanisms = parse_mechanisms(mechanism_text);
  if (svg && !out_path) throw InputError("--svg: requires --out");

  std::vector<std::vector<ec::SweepRow>> per_mechanism;
  for (auto m : mechanisms) per_mechanism.push_back(ec::sweep(fixed, *vary, grid, m));

  std::string csv = "value,mechanism,r,s,welfare\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (const auto& rows : per_mechanism) {
      const auto& row = rows[i];
      csv += fmt::format("{},{},{},{},{}\n", format_number(row.value, precision), ec::to_string(row.mechanism),
                         format_number(row.r, precision), format_number(row.s, precision),
                         format_number(row.welfare, precision));
    }

  if (!out_path) {
    out << csv;
    return ok;
  }
  write_file(*out_path, csv);
  if (svg) {
    std::vector<Series> series;
    for (const auto& rows : per_mechanism) {
      Series s{std::string(ec::to_string(rows.front().mechanism)), {}, {}};
      for (const auto& row : rows) s.x.push_back(row.value), s.y.push_back(row.welfare);
      series.push_back(std::move(s));
    }
    write_file(fs::path(*out_path).replace_extension(".svg"),
               line_chart(series, std::string(ec::to_string(*vary)), "social welfare"));
  }
  out << fmt::format("wrote {} rows to {}\n", grid.size() * mechanisms.size(), *out_path);
  return ok;
}

std::string plans_field(const std::vector<cf::VerificationPlan>& plans) {
  std::string s;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (i) s += ';';
    s += cf::to_string(plans[i]);
  }
  return s;
}

int cmd_simulate(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                 const std::optional<std::string>& mechanism, const std::optional<std::string>& out_dir,
                 int precision, bool digest_only, std::ostream& out) {
  sn::SimScenario sc = sn::scenario_from_json(load_json_file(scenario_path));
  if (seed) sc.seed = *seed;
  if (mechanism) sc.mechanism.kind = sn::parse_mechanism(*mechanism);
  sc.validate();

  const sn::RunResult result = sn::run(sc);
  const sn::MetricsRecord& m = result.metrics;
  if (digest_only) {
    out << m.event_log_digest << '\n';
    return sn::safety_holds(m) ? ok : invariant_violation;
  }
  auto num = [&](double v) { return format_number(v, precision); };

  if (out_dir) {
    std::error_code ec;
    fs::create_directories(*out_dir, ec);
    if (ec) throw InputError(fmt::format("--out: cannot create {}: {}", *out_dir, ec.message()));
    std::string metrics = "fid,outcome,latency,plan,reward\n";
    for (const auto& f : m.flows)
      metrics += fmt::format("{},{},{},{},{}\n", f.fid.hex(), sn::to_string(f.outcome), num(f.latency),
                             plans_field(f.plans), num(f.reward));
    write_file(fs::path(*out_dir) / "metrics.csv", metrics);

    std::string summary = "metric,value\n";
    auto row = [&](std::string_view k, const std::string& v) { summary += fmt::format("{},{}\n", k, v); };
    row("flows", std::to_string(m.flows.size()));
    row("committed", std::to_string(m.committed));
    row("rejected_endorsement", std::to_string(m.rejected_endorsement));
    row("rejected_validation", std::to_string(m.rejected_validation));
    row("error_to_switch", std::to_string(m.error_to_switch));
    row("malicious_committed", std::to_string(m.malicious_total - m.malicious_blocked));
    row("tasks", std::to_string(m.tasks.size()));
    row("mean_latency", num(m.mean_latency));
    row("rewards_paid", num(m.rewards_paid));
    row("realized_welfare", num(m.realized_welfare));
    row("ledger_height", std::to_string(m.ledger_height));
    row("event_log_digest", m.event_log_digest);
    write_file(fs::path(*out_dir) / "summary.csv", summary);

    std::string log;
    for (const auto& line : result.event_log) log += line + '\n';
    write_file(fs::path(*out_dir) / "events.jsonl", log);
  }

  out << fmt::format("flows {} committed {} blocked {}\n", m.flows.size(), m.committed, m.flows.size() - m.committed);
  out << fmt::format("legit committed {}/{}  malicious committed {}/{}\n", m.legit_committed, m.legit_total,
                     m.malicious_total - m.malicious_blocked, m.malicious_total);
  out << "mean latency " << num(m.mean_latency) << '\n';
  out << "realized welfare " << num(m.realized_welfare) << " over " << m.tasks.size() << " tasks\n";
  out << "ledger height " << m.ledger_height << ", installs " << m.switch_installs << '\n';
  out << "event log digest " << m.event_log_digest << '\n';

  if (!sn::safety_holds(m)) {
    out << fmt::format(
        "SAFETY VIOLATION: policy_violations_installed={} tampered_committed={} chains_valid={} "
        "commit_agreement={} paid={} received={}\n",
        m.policy_violations_installed, m.tampered_committed, m.chains_valid, m.commit_agreement,
        num(m.rewards_paid), num(m.rewards_received));
    return invariant_violation;
  }
  return ok;
}

int cmd_verify(const std::string& flow_path, const std::string& policy_path, const std::string& topology_path,
               const std::string& plan_text, std::ostream& out) {
  cf::VerificationPlan plan;
  if (plan_text == "complex") plan = cf::VerificationPlan::complex;
  else if (plan_text == "simple") plan = cf::VerificationPlan::simple;
  else throw InputError(fmt::format("--plan: expected simple or complex, got '{}'", plan_text));

  const FlowRequest req = flow_request_from_json(load_json_file(flow_path));
  const cf::ConformancePolicy policy = policy_from_json(load_json_file(policy_path));
  const cf::NetworkTopology topology = topology_from_json(load_json_file(topology_path));
  try {
    policy.validate();
    topology.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  FlowProposal proposal;
  proposal.tx.controller_id = req.controller_id;
  proposal.tx.fid = flow_id_of(req.packet);
  proposal.tx.packet = req.packet;
  proposal.tx.rules = req.rules;
  proposal.tx.topology_version = req.topology_version ? req.topology_version : topology.version;

  try {
    const cf::Verdict v = cf::invoke_chaincode(proposal, plan, policy, topology);
    if (v.assertion) {
      out << "TRUE\n";
      return ok;
    }
    out << "FALSE " << cf::to_string(v.reason) << '\n';
  } catch (const cf::ConformanceError& e) {
    out << "FALSE " << cf::to_string(e.kind()) << " (" << e.what() << ")\n";
  }
  return conformance_false;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flow-rule verification with incentive-compatible verifier rewards", "bcsdn"};
  app.require_subcommand(1);
  app.fallthrough();
  int precision = 6;
  app.add_option("--precision", precision, "significant digits in numeric output")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();

  EconFlags optimal_flags;
  auto* optimal = app.add_subcommand("optimal", "print the optimal contract and the Stackelberg benchmark");
  optimal_flags.attach(*optimal);

  EconFlags sweep_flags;
  std::string vary;
  std::optional<std::string> grid, sweep_out;
  std::string sweep_mechanism = "both";
  bool svg = false;
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter and write welfare per mechanism as CSV");
  sweep_flags.attach(*sweep);
  sweep->add_option("--vary", vary, "alpha, beta, p or epsilon")->required();
  sweep->add_option("--grid", grid, "comma list or lo:step:hi (default: figure grid)");
  sweep->add_option("--mechanism", sweep_mechanism, "contract, stackelberg or both")->capture_default_str();
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");
  sweep->add_flag("--svg", svg, "also write a line chart next to --out");

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sim_mechanism, sim_out;
  bool digest_only = false;
  auto* simulate = app.add_subcommand("simulate", "run a scenario through the simulated network");
  simulate->add_option("scenario", scenario_path, "scenario JSON")->required();
  simulate->add_option("--seed", seed, "override the scenario seed");
  simulate->add_option("--mechanism", sim_mechanism, "contract, stackelberg or fixed-reward");
  simulate->add_option("--out", sim_out, "directory for metrics.csv, summary.csv and events.jsonl");
  simulate->add_flag("--digest-only", digest_only, "print only the event-log digest");

  std::string flow_path, policy_path, topology_path, plan = "complex";
  auto* verify = app.add_subcommand("verify", "check one flow request against a policy");
  verify->add_option("--flow", flow_path, "flow request JSON")->required();
  verify->add_option("--policy", policy_path, "policy JSON")->required();
  verify->add_option("--topology", topology_path, "topology JSON")->required();
  verify->add_option("--plan", plan, "simple or complex")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  }

  try {
    if (*optimal) return cmd_optimal(optimal_flags.params, precision, out);
    if (*sweep) return cmd_sweep(sweep_flags.params, vary, grid, sweep_mechanism, sweep_out, svg, precision, out);
    if (*simulate) return cmd_simulate(scenario_path, seed, sim_mechanism, sim_out, precision, digest_only, out);
    if (*verify) return cmd_verify(flow_path, policy_path, topology_path, plan, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const ec::DomainError& e) {
    err << "error: " << e.what() << '\n';
    return input_error;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return invariant_violation;
  }
  return input_error;
}

}  // namespace bcsdn::cli
