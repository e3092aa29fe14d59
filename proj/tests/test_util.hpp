#pragma once

#include <string>

#include "dnr/network.hpp"

inline std::string data_path(const std::string& name) {
  return std::string(DNR_DATA_DIR) + "/" + name;
}

inline dnr::Network load_data(const std::string& name) {
  return dnr::load_case(data_path(name));
}

/// Small hand-built cases used across the unit tests. Unit base, so ohms
/// read as per-unit and kW demands as per-unit/1000.
inline dnr::CaseData path_case(int buses, double r_ohm = 1.0, double p_kw = 1.0) {
  dnr::CaseData d;
  d.name = "path";
  d.root = 0;
  d.base = {1.0, 1.0};
  for (int i = 0; i < buses; ++i)
    d.buses.push_back({i, i == 0 ? 0.0 : p_kw, 0.0});
  for (int i = 1; i < buses; ++i)
    d.lines.push_back({i, i - 1, i, r_ohm, 0.0});
  return d;
}

inline dnr::CaseData star_case(int leaves, double r_ohm = 1.0, double p_kw = 1.0) {
  dnr::CaseData d;
  d.name = "star";
  d.root = 0;
  d.base = {1.0, 1.0};
  d.buses.push_back({0, 0.0, 0.0});
  for (int i = 1; i <= leaves; ++i) {
    d.buses.push_back({i, p_kw, 0.0});
    d.lines.push_back({i, 0, i, r_ohm, 0.0});
  }
  return d;
}
