#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "vlearn/trajectory.hpp"

namespace vlearn {

/// Column mapping for the trajectory CSV format: one row per (patient, time),
/// the final row of each patient carrying no action/utility. When
/// state_columns is empty every column named s1, s2, ... is used in order.
struct CsvSchema {
  std::string id_column = "patient_id";
  std::string time_column = "t";
  std::vector<std::string> state_columns;
  std::string action_column = "action";
  std::string utility_column = "utility";
  std::string followup_column = "followup";
  int action_count = 0;  // 0: infer as max observed action + 1
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

inline std::string row_err(int row, const std::string& msg) {
  return "row " + std::to_string(row) + ": " + msg;
}

inline double parse_double(const std::string& s, int row, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument(row_err(row, "cannot parse " + what + " value '" + s + "'"));
  }
}

inline long parse_long(const std::string& s, int row, const std::string& what) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument(row_err(row, "cannot parse " + what + " value '" + s + "'"));
  }
}

}  // namespace detail

inline Dataset load_dataset(std::istream& in, const CsvSchema& schema = {}) {
  using detail::row_err;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_csv_line(line);

  auto col_of = [&](const std::string& name) -> std::optional<int> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<int>(it - header.begin());
  };
  auto require = [&](const std::string& name) {
    auto c = col_of(name);
    if (!c) throw std::invalid_argument("missing column '" + name + "'");
    return *c;
  };

  const int id_col = require(schema.id_column);
  const int t_col = require(schema.time_column);
  std::vector<int> state_cols;
  if (schema.state_columns.empty()) {
    for (int p = 1;; ++p) {
      auto c = col_of("s" + std::to_string(p));
      if (!c) break;
      state_cols.push_back(*c);
    }
    if (state_cols.empty()) throw std::invalid_argument("missing column 's1'");
  } else {
    for (const auto& name : schema.state_columns) state_cols.push_back(require(name));
  }
  const int action_col = require(schema.action_column);
  const auto utility_col = col_of(schema.utility_column);
  const auto followup_col = col_of(schema.followup_column);
  const int p = static_cast<int>(state_cols.size());

  Dataset ds;
  ds.state_dim = p;
  std::unordered_set<std::string> finished_ids;
  Trajectory cur;
  long cur_t = 0;
  bool have_cur = false;
  int max_action = -1;
  std::vector<std::pair<int, int>> action_rows;  // (action, row) for late range checks

  auto flush = [&]() {
    if (!have_cur) return;
    if (cur.actions.size() + 1 != cur.states.size())
      throw std::invalid_argument("patient " + cur.patient_id +
                                  ": last row must be a terminal state row (no action)");
    finished_ids.insert(cur.patient_id);
    ds.trajectories.push_back(std::move(cur));
    cur = Trajectory{};
    have_cur = false;
  };

  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (static_cast<int>(cells.size()) < static_cast<int>(header.size()))
      throw std::invalid_argument(row_err(row, "expected " + std::to_string(header.size()) +
                                                   " cells, got " + std::to_string(cells.size())));
    const std::string id = cells[id_col];
    const long t = detail::parse_long(cells[t_col], row, "time");

    if (!have_cur || id != cur.patient_id) {
      if (finished_ids.count(id))
        throw std::invalid_argument(row_err(row, "rows for patient " + id + " are not contiguous"));
      flush();
      cur.patient_id = id;
      cur_t = t;
      have_cur = true;
    } else {
      if (t != cur_t + 1)
        throw std::invalid_argument(row_err(row, "non-contiguous time index for patient " + id));
      cur_t = t;
    }

    Eigen::VectorXd s(p);
    for (int j = 0; j < p; ++j) {
      if (cells[state_cols[j]].empty())
        throw std::invalid_argument(row_err(row, "ragged state dimension (empty state cell)"));
      s(j) = detail::parse_double(cells[state_cols[j]], row, "state");
    }
    cur.states.push_back(std::move(s));

    bool followed = true;
    if (followup_col && !cells[*followup_col].empty())
      followed = detail::parse_long(cells[*followup_col], row, "followup") != 0;
    cur.followup.push_back(followed);

    const std::string& a_cell = cells[action_col];
    if (!a_cell.empty()) {
      const int a = static_cast<int>(detail::parse_long(a_cell, row, "action"));
      if (a < 0) throw std::invalid_argument(row_err(row, "action out of range"));
      if (schema.action_count > 0 && a >= schema.action_count)
        throw std::invalid_argument(row_err(row, "action out of range"));
      action_rows.emplace_back(a, row);
      max_action = std::max(max_action, a);
      cur.actions.push_back(a);
      double u = 0.0;
      if (utility_col && !cells[*utility_col].empty())
        u = detail::parse_double(cells[*utility_col], row, "utility");
      cur.utilities.push_back(u);
    } else if (cur.actions.size() + 1 != cur.states.size()) {
      throw std::invalid_argument(row_err(row, "missing action on a non-terminal row"));
    }
  }
  flush();

  ds.action_count = schema.action_count > 0 ? schema.action_count : max_action + 1;
  for (const auto& [a, r] : action_rows)
    if (a >= ds.action_count) throw std::invalid_argument(row_err(r, "action out of range"));
  ds.validate();
  return ds;
}

inline Dataset load_dataset(const std::string& path, const CsvSchema& schema = {}) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return load_dataset(in, schema);
}

inline void write_dataset(std::ostream& out, const Dataset& ds) {
  bool any_dropout = false;
  for (const auto& tr : ds.trajectories)
    for (bool f : tr.followup) any_dropout |= !f;

  out << "patient_id,t";
  for (int j = 1; j <= ds.state_dim; ++j) out << ",s" << j;
  out << ",action,utility";
  if (any_dropout) out << ",followup";
  out << "\n";

  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& tr : ds.trajectories) {
    for (size_t t = 0; t < tr.states.size(); ++t) {
      out << tr.patient_id << "," << (t + 1);
      for (int j = 0; j < ds.state_dim; ++j) out << "," << num(tr.states[t](j));
      if (t < tr.actions.size())
        out << "," << tr.actions[t] << "," << num(tr.utilities[t]);
      else
        out << ",,";
      if (any_dropout) out << "," << (tr.followup[t] ? 1 : 0);
      out << "\n";
    }
  }
}

inline void write_dataset(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
  write_dataset(out, ds);
}

}  // namespace vlearn
