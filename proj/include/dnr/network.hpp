#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace dnr {

struct Bus {
  int id = 0;
  double p_kw = 0.0;
  double q_kvar = 0.0;
};

struct Line {
  int id = 0;
  int from = 0;
  int to = 0;
  double r_ohm = 0.0;
  double x_ohm = 0.0;
};

struct BaseValues {
  double v_kv = 0.0;
  double s_mva = 0.0;
};

/// Raw case-file contents before validation.
struct CaseData {
  std::string name;
  std::string notes;
  int root = 0;
  BaseValues base;
  std::vector<Bus> buses;
  std::vector<Line> lines;
};

/// One broken invariant: which entity ("bus 5", "line 7", "network") and
/// which rule it violates.
struct Violation {
  std::string entity;
  std::string rule;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& msg, std::vector<Violation> violations)
      : std::runtime_error(msg), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Checks every case invariant. Empty result means the data describes a
/// well-formed network. Violations are data, not errors.
std::vector<Violation> validate_case(const CaseData& data);

/// Immutable validated network. Bus and line ids are arbitrary nonnegative
/// integers; they are remapped to dense indices internally. All read-only
/// accessors are safe to call concurrently.
class Network {
 public:
  /// Validates and constructs; throws ValidationError listing every
  /// violated invariant.
  static Network from_case(CaseData data);

  const std::string& name() const { return data_.name; }
  const std::string& notes() const { return data_.notes; }
  int root_id() const { return data_.root; }
  const BaseValues& base() const { return data_.base; }
  const std::vector<Bus>& buses() const { return data_.buses; }
  const std::vector<Line>& lines() const { return data_.lines; }

  int bus_count() const { return static_cast<int>(data_.buses.size()); }
  int line_count() const { return static_cast<int>(data_.lines.size()); }

  int bus_index(int bus_id) const;
  int line_index(int line_id) const;
  int bus_id(int bus_idx) const { return data_.buses[bus_idx].id; }
  int line_id(int line_idx) const { return data_.lines[line_idx].id; }
  int root_index() const { return root_index_; }

  // Per-unit quantities, indexed by dense index.
  double r_pu(int line_idx) const { return r_pu_[line_idx]; }
  double x_pu(int line_idx) const { return x_pu_[line_idx]; }
  double p_pu(int bus_idx) const { return p_pu_[bus_idx]; }
  double q_pu(int bus_idx) const { return q_pu_[bus_idx]; }

  double z_base_ohm() const { return data_.base.v_kv * data_.base.v_kv / data_.base.s_mva; }
  double s_base_kw() const { return data_.base.s_mva * 1000.0; }

  double total_p_kw() const;
  double total_q_kvar() const;

  struct Arc {
    int line_idx;
    int to_bus;  // dense bus index at the far end
  };
  const std::vector<Arc>& adjacent(int bus_idx) const { return adjacency_[bus_idx]; }

  /// FNV-1a digest of the canonical case serialization, for run reports.
  std::string digest() const;

 private:
  Network() = default;

  CaseData data_;
  int root_index_ = 0;
  std::unordered_map<int, int> bus_index_;
  std::unordered_map<int, int> line_index_;
  std::vector<double> r_pu_, x_pu_, p_pu_, q_pu_;
  std::vector<std::vector<Arc>> adjacency_;
};

/// Strict schema parse: unknown keys rejected, every field type-checked.
CaseData parse_case_json(const nlohmann::json& j);
nlohmann::json to_case_json(const Network& net);

Network load_case(const std::filesystem::path& path);
void save_case(const Network& net, const std::filesystem::path& path);

}  // namespace dnr
