#include "bcsdn/simnet/scenario_io.hpp"

#include <fmt/format.h>

#include "bcsdn/conformance_io.hpp"

namespace bcsdn::simnet {

using nlohmann::json;

namespace {

template <class T>
T get(const json& j, const char* name, const std::string& ctx) {
  if (!j.is_object()) throw InputError(fmt::format("{}: expected an object", ctx));
  auto it = j.find(name);
  if (it == j.end()) throw InputError(fmt::format("{}.{}: missing field", ctx, name));
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw InputError(fmt::format("{}.{}: wrong type", ctx, name));
  }
}

template <class T>
T get_or(const json& j, const char* name, const std::string& ctx, T fallback) {
  if (!j.is_object() || !j.contains(name)) return fallback;
  return get<T>(j, name, ctx);
}

// json's get<uint64_t> happily wraps negative numbers.
std::uint64_t get_count(const json& j, const char* name, const std::string& ctx, std::uint64_t fallback) {
  if (!j.contains(name)) return fallback;
  const json& v = j.at(name);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
    throw InputError(fmt::format("{}.{}: expected a non-negative integer", ctx, name));
  return v.get<std::uint64_t>();
}

Legitimacy parse_tag(std::string_view text) {
  if (text == "legit") return Legitimacy::legit;
  if (text == "malicious") return Legitimacy::malicious;
  throw InputError(fmt::format("workload.tag: unknown tag '{}'", text));
}

TamperHop parse_hop(std::string_view text) {
  if (text == "controller-vi") return TamperHop::controller_vi;
  if (text == "vi-verifier") return TamperHop::vi_verifier;
  throw InputError(fmt::format("tamper_hop: unknown hop '{}'", text));
}

}  // namespace

MechanismKind parse_mechanism(std::string_view text) {
  if (text == "contract") return MechanismKind::contract;
  if (text == "stackelberg") return MechanismKind::stackelberg;
  if (text == "fixed-reward" || text == "fixed") return MechanismKind::fixed_reward;
  throw InputError(fmt::format("mechanism: unknown mechanism '{}'", text));
}

Adversary parse_adversary(std::string_view text) {
  if (text == "none") return Adversary::none;
  if (text == "malicious-flow") return Adversary::malicious_flow;
  if (text == "tamper") return Adversary::tamper;
  if (text == "greedy-verifier") return Adversary::greedy_verifier;
  if (text == "path-detour") return Adversary::path_detour;
  throw InputError(fmt::format("adversary: unknown adversary '{}'", text));
}

SimScenario scenario_from_json(const json& j) {
  const std::string ctx = "scenario";
  if (!j.is_object()) throw InputError("scenario: expected an object");
  SimScenario sc;
  sc.topology = topology_from_json(get<json>(j, "topology", ctx));
  sc.policy = policy_from_json(get<json>(j, "policy", ctx));

  const json e = get<json>(j, "endorsement", ctx);
  sc.endorsement.id = get_or<std::string>(e, "id", "endorsement", "default");
  sc.endorsement.n = static_cast<std::uint32_t>(get_count(e, "n", "endorsement", 1));
  for (const auto& v : get<std::vector<std::string>>(e, "eligible", "endorsement")) sc.endorsement.eligible.insert(v);

  const json econ = get_or<json>(j, "econ", ctx, json::object());
  sc.econ.alpha = get_or<double>(econ, "alpha", "econ", sc.econ.alpha);
  sc.econ.beta = get_or<double>(econ, "beta", "econ", sc.econ.beta);
  sc.econ.epsilon = get_or<double>(econ, "epsilon", "econ", sc.econ.epsilon);
  sc.econ.p = get_or<double>(econ, "p", "econ", sc.econ.p);
  sc.econ.sigma = get_or<double>(econ, "sigma", "econ", sc.econ.sigma);
  sc.econ.s_max = get_or<double>(econ, "s_max", "econ", sc.econ.s_max);

  sc.mechanism.kind = parse_mechanism(get_or<std::string>(j, "mechanism", ctx, "contract"));
  sc.mechanism.fixed_reward = get_or<double>(j, "fixed_reward", ctx, 0.0);

  for (const auto& a : get<json>(j, "agents", ctx)) {
    AgentSpec spec;
    spec.id = get<std::string>(a, "id", "agents");
    spec.switch_id = get<std::string>(a, "switch", "agents");
    sc.agents.push_back(std::move(spec));
  }
  sc.initiator = get<std::string>(j, "initiator", ctx);
  sc.controller_id = get_or<std::string>(j, "controller_id", ctx, sc.controller_id);
  sc.chaincode_id = get_or<std::string>(j, "chaincode_id", ctx, sc.chaincode_id);
  sc.link_delay = get_count(j, "link_delay", ctx, sc.link_delay);
  sc.batch_size = get_count(j, "batch_size", ctx, sc.batch_size);
  sc.batch_timeout = get_count(j, "batch_timeout", ctx, sc.batch_timeout);
  sc.purge_retention = get_or<double>(j, "purge_retention", ctx, sc.purge_retention);
  sc.seed = get_count(j, "seed", ctx, sc.seed);
  sc.adversary = parse_adversary(get_or<std::string>(j, "adversary", ctx, "none"));
  sc.tamper_hop = parse_hop(get_or<std::string>(j, "tamper_hop", ctx, "vi-verifier"));

  for (const auto& w : get<json>(j, "workload", ctx)) {
    WorkloadItem item;
    item.tick = get_count(w, "tick", "workload", 0);
    item.packet = packet_from_json(get<json>(w, "packet", "workload"));
    item.tag = parse_tag(get_or<std::string>(w, "tag", "workload", "legit"));
    sc.workload.push_back(std::move(item));
  }
  return sc;
}

json to_json(const SimScenario& sc) {
  json agents = json::array();
  for (const auto& a : sc.agents) agents.push_back({{"id", a.id}, {"switch", a.switch_id}});
  json workload = json::array();
  for (const auto& w : sc.workload)
    workload.push_back({{"tick", w.tick}, {"packet", bcsdn::to_json(w.packet)}, {"tag", to_string(w.tag)}});
  json j{{"topology", bcsdn::to_json(sc.topology)},
         {"policy", bcsdn::to_json(sc.policy)},
         {"endorsement",
          {{"id", sc.endorsement.id}, {"n", sc.endorsement.n}, {"eligible", sc.endorsement.eligible}}},
         {"econ",
          {{"alpha", sc.econ.alpha},
           {"beta", sc.econ.beta},
           {"epsilon", sc.econ.epsilon},
           {"p", sc.econ.p},
           {"sigma", sc.econ.sigma},
           {"s_max", sc.econ.s_max}}},
         {"mechanism", to_string(sc.mechanism.kind)},
         {"agents", agents},
         {"initiator", sc.initiator},
         {"controller_id", sc.controller_id},
         {"chaincode_id", sc.chaincode_id},
         {"link_delay", sc.link_delay},
         {"batch_size", sc.batch_size},
         {"batch_timeout", sc.batch_timeout},
         {"purge_retention", sc.purge_retention},
         {"seed", sc.seed},
         {"adversary", to_string(sc.adversary)},
         {"tamper_hop", to_string(sc.tamper_hop)},
         {"workload", workload}};
  if (sc.mechanism.kind == MechanismKind::fixed_reward) j["fixed_reward"] = sc.mechanism.fixed_reward;
  return j;
}

SimScenario load_scenario(const std::filesystem::path& path) {
  SimScenario sc = scenario_from_json(load_json_file(path));
  sc.validate();
  return sc;
}

}  // namespace bcsdn::simnet
