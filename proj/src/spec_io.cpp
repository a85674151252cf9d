#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qnet/errors.hpp"
#include "qnet/network.hpp"

namespace qnet {

namespace {

using nlohmann::json;

// Strict schema: every object is checked against its full key list, so a typo
// fails loudly instead of silently falling back to a default.
void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) fail(Errc::bad_config, where + ": expected an object");
  for (const char* key : required)
    if (!obj.contains(key)) fail(Errc::bad_config, where + ": missing key \"" + key + "\"");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : required) known = known || it.key() == key;
    for (const char* key : optional) known = known || it.key() == key;
    if (!known) fail(Errc::bad_config, where + ": unknown key \"" + it.key() + "\"");
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(Errc::bad_config, where + ": expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(Errc::bad_config, where + ": expected an integer");
  return v.get<int>();
}

std::vector<double> as_number_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail(Errc::bad_config, where + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_number(e, where));
  return out;
}

ServiceFamily parse_service(const json& j, const std::string& where) {
  expect_keys(j, where, {"family"}, {"offset", "theta_slope", "width", "const"});
  const std::string family = j.at("family").is_string() ? j.at("family").get<std::string>() : "";
  ServiceFamily f;
  if (family == "shifted_uniform") {
    expect_keys(j, where, {"family", "offset", "theta_slope", "width"});
    f.kind = ServiceFamily::Kind::shifted_uniform;
    f.offset = as_number(j.at("offset"), where + ".offset");
    f.theta_slope = as_number(j.at("theta_slope"), where + ".theta_slope");
    f.width = as_number(j.at("width"), where + ".width");
  } else if (family == "exponential_scale") {
    expect_keys(j, where, {"family"});
    f.kind = ServiceFamily::Kind::exponential_scale;
  } else if (family == "deterministic") {
    expect_keys(j, where, {"family", "const"}, {"theta_slope"});
    f.kind = ServiceFamily::Kind::deterministic;
    f.offset = as_number(j.at("const"), where + ".const");
    if (j.contains("theta_slope"))
      f.theta_slope = as_number(j.at("theta_slope"), where + ".theta_slope");
  } else {
    fail(Errc::bad_config, where + ": unknown service family \"" + family + "\"");
  }
  return f;
}

RoutingDistribution parse_routing(const json& j, const std::string& where) {
  expect_keys(j, where, {"kind", "targets"}, {"probs", "const", "slope"});
  const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
  RoutingDistribution d;
  if (!j.at("targets").is_array()) fail(Errc::bad_config, where + ".targets: expected an array");
  for (const auto& t : j.at("targets")) d.targets.push_back(as_int(t, where + ".targets"));
  if (kind == "constant") {
    expect_keys(j, where, {"kind", "targets", "probs"});
    d.kind = RoutingDistribution::Kind::constant;
    d.base = as_number_array(j.at("probs"), where + ".probs");
  } else if (kind == "affine") {
    expect_keys(j, where, {"kind", "targets", "const", "slope"});
    d.kind = RoutingDistribution::Kind::affine;
    d.base = as_number_array(j.at("const"), where + ".const");
    d.slope = as_number_array(j.at("slope"), where + ".slope");
  } else {
    fail(Errc::bad_config, where + ": unknown routing kind \"" + kind + "\"");
  }
  return d;
}

}  // namespace

NetworkSpec parse_network_spec(const std::string& json_text) {
  json root = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) fail(Errc::bad_config, "config is not valid JSON");
  expect_keys(root, "config",
              {"nodes", "horizon_L", "theta_domain", "tagged_node", "completions_K"});

  NetworkSpec spec;
  if (!root.at("nodes").is_array()) fail(Errc::bad_config, "config.nodes: expected an array");
  int index = 0;
  for (const auto& jn : root.at("nodes")) {
    const std::string where = "config.nodes[" + std::to_string(index++) + "]";
    expect_keys(jn, where, {"id", "initial_customers", "service", "routing"});
    NodeSpec node;
    node.id = as_int(jn.at("id"), where + ".id");
    node.initial_customers = as_int(jn.at("initial_customers"), where + ".initial_customers");
    node.service = parse_service(jn.at("service"), where + ".service");
    node.routing = parse_routing(jn.at("routing"), where + ".routing");
    spec.nodes.push_back(std::move(node));
  }
  spec.horizon_L = as_int(root.at("horizon_L"), "config.horizon_L");
  const auto domain = as_number_array(root.at("theta_domain"), "config.theta_domain");
  if (domain.size() != 2) fail(Errc::bad_config, "config.theta_domain: expected [lo, hi]");
  spec.theta_domain = {domain[0], domain[1]};
  spec.tagged_node = as_int(root.at("tagged_node"), "config.tagged_node");
  spec.completions_K = as_int(root.at("completions_K"), "config.completions_K");
  return spec;
}

NetworkSpec load_network_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::bad_config, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_spec(buf.str());
}

std::string network_spec_to_json(const NetworkSpec& spec) {
  json root;
  root["nodes"] = json::array();
  for (const NodeSpec& node : spec.nodes) {
    json jn;
    jn["id"] = node.id;
    jn["initial_customers"] = node.initial_customers;
    json js;
    js["family"] = service_kind_name(node.service.kind);
    switch (node.service.kind) {
      case ServiceFamily::Kind::shifted_uniform:
        js["offset"] = node.service.offset;
        js["theta_slope"] = node.service.theta_slope;
        js["width"] = node.service.width;
        break;
      case ServiceFamily::Kind::exponential_scale:
        break;
      case ServiceFamily::Kind::deterministic:
        js["const"] = node.service.offset;
        js["theta_slope"] = node.service.theta_slope;
        break;
    }
    jn["service"] = std::move(js);
    json jr;
    jr["kind"] = routing_kind_name(node.routing.kind);
    jr["targets"] = node.routing.targets;
    if (node.routing.kind == RoutingDistribution::Kind::constant) {
      jr["probs"] = node.routing.base;
    } else {
      jr["const"] = node.routing.base;
      jr["slope"] = node.routing.slope;
    }
    jn["routing"] = std::move(jr);
    root["nodes"].push_back(std::move(jn));
  }
  root["horizon_L"] = spec.horizon_L;
  root["theta_domain"] = {spec.theta_domain.lo, spec.theta_domain.hi};
  root["tagged_node"] = spec.tagged_node;
  root["completions_K"] = spec.completions_K;
  return root.dump(2) + "\n";
}

}  // namespace qnet
