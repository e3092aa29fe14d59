#include "dnr/network.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

namespace dnr {

namespace {

std::string entity_bus(int id) { return "bus " + std::to_string(id); }
std::string entity_line(int id) { return "line " + std::to_string(id); }

void check_keys(const nlohmann::json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ParseError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

double get_num(const nlohmann::json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
  if (!obj[key].is_number()) throw ParseError(where + "." + key + ": expected a number");
  return obj[key].get<double>();
}

int get_int(const nlohmann::json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
  if (!obj[key].is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
  return obj[key].get<int>();
}

}  // namespace

std::vector<Violation> validate_case(const CaseData& data) {
  std::vector<Violation> out;

  if (!(data.base.v_kv > 0.0))
    out.push_back({"network", "base voltage must be positive"});
  if (!(data.base.s_mva > 0.0))
    out.push_back({"network", "base power must be positive"});

  std::unordered_map<int, int> bus_index;
  for (int i = 0; i < static_cast<int>(data.buses.size()); ++i) {
    const Bus& b = data.buses[i];
    if (b.id < 0) out.push_back({entity_bus(b.id), "bus id must be nonnegative"});
    if (!bus_index.emplace(b.id, i).second)
      out.push_back({entity_bus(b.id), "duplicate bus id"});
  }

  bool have_root = bus_index.count(data.root) > 0;
  if (!have_root) {
    out.push_back({"network", "root bus " + std::to_string(data.root) + " does not exist"});
  }
  for (const Bus& b : data.buses) {
    if (b.id == data.root) {
      if (b.p_kw != 0.0 || b.q_kvar != 0.0)
        out.push_back({entity_bus(b.id), "root bus must have zero demand"});
    } else {
      if (b.p_kw < 0.0) out.push_back({entity_bus(b.id), "negative active demand"});
      if (b.q_kvar < 0.0) out.push_back({entity_bus(b.id), "negative reactive demand"});
    }
  }

  std::set<int> line_ids;
  std::set<std::pair<int, int>> pairs;
  bool endpoints_ok = true;
  for (const Line& l : data.lines) {
    if (!line_ids.insert(l.id).second)
      out.push_back({entity_line(l.id), "duplicate line id"});
    if (l.from == l.to) {
      out.push_back({entity_line(l.id), "endpoints must be distinct"});
      endpoints_ok = false;
    }
    if (!bus_index.count(l.from) || !bus_index.count(l.to)) {
      out.push_back({entity_line(l.id), "endpoint references unknown bus"});
      endpoints_ok = false;
      continue;
    }
    auto key = std::minmax(l.from, l.to);
    if (!pairs.insert(key).second)
      out.push_back({entity_line(l.id), "duplicate line between bus " +
                                            std::to_string(key.first) + " and bus " +
                                            std::to_string(key.second)});
    if (!(l.r_ohm > 0.0)) out.push_back({entity_line(l.id), "resistance must be positive"});
    if (l.x_ohm < 0.0) out.push_back({entity_line(l.id), "reactance must be nonnegative"});
  }

  // Connectivity, only meaningful once endpoints resolve.
  if (have_root && endpoints_ok && !data.buses.empty()) {
    int n = static_cast<int>(data.buses.size());
    std::vector<std::vector<int>> adj(n);
    for (const Line& l : data.lines) {
      int u = bus_index[l.from], v = bus_index[l.to];
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    std::vector<char> seen(n, 0);
    std::vector<int> stack{bus_index[data.root]};
    seen[stack[0]] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    for (int i = 0; i < n; ++i)
      if (!seen[i])
        out.push_back({entity_bus(data.buses[i].id), "not connected to the root"});
  }

  return out;
}

Network Network::from_case(CaseData data) {
  std::vector<Violation> violations = validate_case(data);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid network '" << data.name << "':";
    for (const Violation& v : violations) msg << " [" << v.entity << ": " << v.rule << "]";
    throw ValidationError(msg.str(), std::move(violations));
  }

  Network net;
  net.data_ = std::move(data);
  int n = net.bus_count();
  int m = net.line_count();
  for (int i = 0; i < n; ++i) net.bus_index_[net.data_.buses[i].id] = i;
  for (int e = 0; e < m; ++e) net.line_index_[net.data_.lines[e].id] = e;
  net.root_index_ = net.bus_index_.at(net.data_.root);

  double z_base = net.z_base_ohm();
  double s_kw = net.s_base_kw();
  net.r_pu_.resize(m);
  net.x_pu_.resize(m);
  for (int e = 0; e < m; ++e) {
    net.r_pu_[e] = net.data_.lines[e].r_ohm / z_base;
    net.x_pu_[e] = net.data_.lines[e].x_ohm / z_base;
  }
  net.p_pu_.resize(n);
  net.q_pu_.resize(n);
  for (int i = 0; i < n; ++i) {
    net.p_pu_[i] = net.data_.buses[i].p_kw / s_kw;
    net.q_pu_[i] = net.data_.buses[i].q_kvar / s_kw;
  }

  net.adjacency_.resize(n);
  for (int e = 0; e < m; ++e) {
    int u = net.bus_index_.at(net.data_.lines[e].from);
    int v = net.bus_index_.at(net.data_.lines[e].to);
    net.adjacency_[u].push_back({e, v});
    net.adjacency_[v].push_back({e, u});
  }
  return net;
}

int Network::bus_index(int bus_id) const {
  auto it = bus_index_.find(bus_id);
  if (it == bus_index_.end())
    throw std::out_of_range("unknown bus id " + std::to_string(bus_id));
  return it->second;
}

int Network::line_index(int line_id) const {
  auto it = line_index_.find(line_id);
  if (it == line_index_.end())
    throw std::out_of_range("unknown line id " + std::to_string(line_id));
  return it->second;
}

double Network::total_p_kw() const {
  double s = 0.0;
  for (const Bus& b : data_.buses) s += b.p_kw;
  return s;
}

double Network::total_q_kvar() const {
  double s = 0.0;
  for (const Bus& b : data_.buses) s += b.q_kvar;
  return s;
}

std::string Network::digest() const {
  std::string canonical = to_case_json(*this).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CaseData parse_case_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("case: top level must be an object");
  check_keys(j, "case", {"name", "notes", "root", "base", "buses", "lines"});

  CaseData data;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ParseError("case.name: expected a string");
    data.name = j["name"].get<std::string>();
  }
  if (j.contains("notes")) {
    if (!j["notes"].is_string()) throw ParseError("case.notes: expected a string");
    data.notes = j["notes"].get<std::string>();
  }
  data.root = get_int(j, "case", "root");

  if (!j.contains("base") || !j["base"].is_object())
    throw ParseError("case.base: expected an object");
  check_keys(j["base"], "case.base", {"v_kv", "s_mva"});
  data.base.v_kv = get_num(j["base"], "case.base", "v_kv");
  data.base.s_mva = get_num(j["base"], "case.base", "s_mva");

  if (!j.contains("buses") || !j["buses"].is_array())
    throw ParseError("case.buses: expected an array");
  int i = 0;
  for (const auto& jb : j["buses"]) {
    std::string where = "buses[" + std::to_string(i++) + "]";
    if (!jb.is_object()) throw ParseError(where + ": expected an object");
    check_keys(jb, where, {"id", "p_kw", "q_kvar"});
    Bus b;
    b.id = get_int(jb, where, "id");
    b.p_kw = get_num(jb, where, "p_kw");
    b.q_kvar = get_num(jb, where, "q_kvar");
    data.buses.push_back(b);
  }

  if (!j.contains("lines") || !j["lines"].is_array())
    throw ParseError("case.lines: expected an array");
  i = 0;
  for (const auto& jl : j["lines"]) {
    std::string where = "lines[" + std::to_string(i++) + "]";
    if (!jl.is_object()) throw ParseError(where + ": expected an object");
    check_keys(jl, where, {"id", "from", "to", "r_ohm", "x_ohm"});
    Line l;
    l.id = get_int(jl, where, "id");
    l.from = get_int(jl, where, "from");
    l.to = get_int(jl, where, "to");
    l.r_ohm = get_num(jl, where, "r_ohm");
    l.x_ohm = get_num(jl, where, "x_ohm");
    data.lines.push_back(l);
  }

  return data;
}

nlohmann::json to_case_json(const Network& net) {
  nlohmann::json j;
  j["name"] = net.name();
  if (!net.notes().empty()) j["notes"] = net.notes();
  j["root"] = net.root_id();
  j["base"] = {{"v_kv", net.base().v_kv}, {"s_mva", net.base().s_mva}};
  j["buses"] = nlohmann::json::array();
  for (const Bus& b : net.buses())
    j["buses"].push_back({{"id", b.id}, {"p_kw", b.p_kw}, {"q_kvar", b.q_kvar}});
  j["lines"] = nlohmann::json::array();
  for (const Line& l : net.lines())
    j["lines"].push_back({{"id", l.id},
                          {"from", l.from},
                          {"to", l.to},
                          {"r_ohm", l.r_ohm},
                          {"x_ohm", l.x_ohm}});
  return j;
}

Network load_case(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open case file: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return Network::from_case(parse_case_json(j));
}

void save_case(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write case file: " + path.string());
  out << to_case_json(net).dump(2) << "\n";
}

}  // namespace dnr
