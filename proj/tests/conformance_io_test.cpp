#include <gtest/gtest.h>

#include "bcsdn/conformance_io.hpp"
#include "support/fixtures.hpp"

using namespace fixtures;
using nlohmann::json;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "no error";
}

const std::string kData = BCSDN_DATA_DIR;

}  // namespace

TEST(PolicyJson, RoundTrip) {
  auto pol = policy();
  pol.forbidden_links = {make_link("s2", "s3")};
  pol.allowed_endpoint_pairs[0].ports = {80, 443};
  EXPECT_EQ(policy_from_json(to_json(pol)), pol);
}

TEST(TopologyJson, RoundTrip) { EXPECT_EQ(topology_from_json(to_json(topology())), topology()); }

TEST(PacketJson, RoundTripWithMac) {
  Packet p = packet();
  p.mac = MacPair{*MacAddress::parse("00:00:00:00:00:01"), *MacAddress::parse("00:00:00:00:00:02")};
  EXPECT_EQ(packet_from_json(to_json(p)), p);
}

TEST(FlowRequestJson, RoundTrip) {
  FlowRequest req{"controller", packet(), rules(kGoodPath, packet()), 3};
  const auto back = flow_request_from_json(to_json(req));
  EXPECT_EQ(back.packet, req.packet);
  EXPECT_EQ(back.rules, req.rules);
  EXPECT_EQ(back.topology_version, 3u);
}

TEST(Json, ErrorsNameTheField) {
  json p = to_json(packet());
  p.erase("destination_ip");
  EXPECT_NE(error_of([&] { packet_from_json(p); }).find("destination_ip"), std::string::npos);

  p = to_json(packet());
  p["source_ip"] = "10.0.0.999";
  EXPECT_NE(error_of([&] { packet_from_json(p); }).find("source_ip"), std::string::npos);

  p = to_json(packet());
  p["destination_port"] = 70000;
  EXPECT_NE(error_of([&] { packet_from_json(p); }).find("destination_port"), std::string::npos);

  p = to_json(packet());
  p["protocol"] = "carrier-pigeon";
  EXPECT_NE(error_of([&] { packet_from_json(p); }).find("protocol"), std::string::npos);

  json t = to_json(topology());
  t["links"].push_back({"s1", "ghost"});
  EXPECT_NE(error_of([&] { topology_from_json(t); }).find("ghost"), std::string::npos);

  json pol = to_json(policy());
  pol["denied_endpoints"] = {"not-a-pattern"};
  EXPECT_NE(error_of([&] { policy_from_json(pol); }).find("denied_endpoints"), std::string::npos);
}

TEST(Json, BundledFilesLoad) {
  EXPECT_EQ(topology_from_json(load_json_file(kData + "/topology.json")), topology());
  EXPECT_EQ(policy_from_json(load_json_file(kData + "/policy.json")), policy());
  const auto req = flow_request_from_json(load_json_file(kData + "/flow_conformant.json"));
  EXPECT_EQ(req.rules, rules(kGoodPath, packet()));
}

TEST(Json, MissingOrBrokenFile) {
  EXPECT_THROW(load_json_file("/nonexistent/policy.json"), InputError);
}
