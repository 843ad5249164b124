// Copyright 2026 The thermosched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "thermosched/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace thermosched {

using nlohmann::json;

namespace {

std::string child(const std::string& where, const std::string& key) {
  return where + "/" + key;
}

std::string child(const std::string& where, std::size_t index) {
  return where + "/" + std::to_string(index);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(child(where, key), "missing required field '" + key + "'");
  }
  return *it;
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where, "expected a number");
  return v.get<double>();
}

long long as_int(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d) return static_cast<long long>(d);
  }
  throw ParseError(where, "expected an integer");
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where, "expected a string");
  return v.get<std::string>();
}

const json& require_array(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array()) throw ParseError(child(where, key), "expected an array");
  return v;
}

std::optional<double> optional_double(const json& obj, const std::string& key,
                                      const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return as_double(*it, child(where, key));
}

}  // namespace

json platform_to_json(const Platform& platform) {
  json clusters = json::array();
  for (const Cluster& c : platform.clusters) {
    clusters.push_back({{"id", c.id},
                        {"core_count", c.core_count},
                        {"label", c.label},
                        {"frequency_mhz", c.frequency_mhz}});
  }
  json doc = {{"idle_power_watts", platform.idle_power_watts}, {"clusters", clusters}};
  if (platform.thermal_b) doc["thermal_b"] = *platform.thermal_b;
  if (platform.thermal_g) doc["thermal_g"] = *platform.thermal_g;
  if (platform.ambient_celsius) doc["ambient_celsius"] = *platform.ambient_celsius;
  return doc;
}

Platform platform_from_json(const json& doc, const std::string& where) {
  Platform p;
  p.idle_power_watts = as_double(require(doc, "idle_power_watts", where),
                                 child(where, "idle_power_watts"));
  p.thermal_b = optional_double(doc, "thermal_b", where);
  p.thermal_g = optional_double(doc, "thermal_g", where);
  p.ambient_celsius = optional_double(doc, "ambient_celsius", where);
  const json& clusters = require_array(doc, "clusters", where);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const std::string w = child(child(where, "clusters"), i);
    const json& c = clusters[i];
    Cluster cl;
    cl.id = static_cast<int>(as_int(require(c, "id", w), child(w, "id")));
    cl.core_count = static_cast<int>(as_int(require(c, "core_count", w), child(w, "core_count")));
    if (auto it = c.find("label"); it != c.end()) cl.label = as_string(*it, child(w, "label"));
    if (auto it = c.find("frequency_mhz"); it != c.end()) {
      cl.frequency_mhz = static_cast<int>(as_int(*it, child(w, "frequency_mhz")));
    }
    p.clusters.push_back(std::move(cl));
  }
  return p;
}

json instance_to_json(const Instance& instance) {
  json tasks = json::array();
  for (const Task& t : instance.tasks) {
    json per = json::array();
    for (std::size_t k = 0; k < t.per_cluster.size(); ++k) {
      const TaskOnCluster& tc = t.per_cluster[k];
      json e = {{"cluster_id", static_cast<int>(k) + 1},
                {"exec_time_ms", tc.exec_time_ms},
                {"activity_coef", tc.activity_coef},
                {"offset_coef", tc.offset_coef}};
      if (tc.energy_cost) e["energy_cost"] = *tc.energy_cost;
      per.push_back(std::move(e));
    }
    tasks.push_back({{"id", t.id}, {"name", t.name}, {"per_cluster", per}});
  }
  return {{"platform", platform_to_json(instance.platform)},
          {"tasks", tasks},
          {"major_frame_ms", instance.major_frame_ms},
          {"max_windows", instance.max_windows}};
}

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("/", "expected an object");
  Instance inst;
  inst.platform = platform_from_json(require(doc, "platform", ""), "/platform");
  const int m = inst.platform.cluster_count();
  const json& tasks = require_array(doc, "tasks", "");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string w = child("/tasks", i);
    const json& t = tasks[i];
    Task task;
    task.id = static_cast<int>(as_int(require(t, "id", w), child(w, "id")));
    if (auto it = t.find("name"); it != t.end()) task.name = as_string(*it, child(w, "name"));
    const json& per = require_array(t, "per_cluster", w);
    task.per_cluster.resize(static_cast<std::size_t>(m));
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (std::size_t e = 0; e < per.size(); ++e) {
      const std::string pw = child(child(w, "per_cluster"), e);
      const json& entry = per[e];
      const long long cid = as_int(require(entry, "cluster_id", pw), child(pw, "cluster_id"));
      if (cid < 1 || cid > m) throw ParseError(child(pw, "cluster_id"), "unknown cluster id");
      const auto k = static_cast<std::size_t>(cid - 1);
      if (seen[k]) throw ParseError(child(pw, "cluster_id"), "duplicate cluster id");
      seen[k] = true;
      TaskOnCluster& tc = task.per_cluster[k];
      tc.exec_time_ms = as_int(require(entry, "exec_time_ms", pw), child(pw, "exec_time_ms"));
      tc.activity_coef = as_double(require(entry, "activity_coef", pw), child(pw, "activity_coef"));
      tc.offset_coef = as_double(require(entry, "offset_coef", pw), child(pw, "offset_coef"));
      tc.energy_cost = optional_double(entry, "energy_cost", pw);
    }
    for (int k = 0; k < m; ++k) {
      if (!seen[static_cast<std::size_t>(k)]) {
        throw ParseError(child(w, "per_cluster"),
                         "no entry for cluster " + std::to_string(k + 1));
      }
    }
    inst.tasks.push_back(std::move(task));
  }
  inst.major_frame_ms = as_int(require(doc, "major_frame_ms", ""), "/major_frame_ms");
  inst.max_windows = static_cast<int>(as_int(require(doc, "max_windows", ""), "/max_windows"));
  return inst;
}

json read_json(std::istream& in, const std::string& name) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(name + " byte " + std::to_string(e.byte), e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  return read_json(in, path.string());
}

void write_json(const json& doc, std::ostream& out) { out << doc.dump(2) << '\n'; }

Instance load_instance(std::istream& in) { return instance_from_json(read_json(in, "instance")); }

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

void save_instance(const Instance& instance, std::ostream& out) {
  write_json(instance_to_json(instance), out);
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_instance(instance, out);
}

json assignment_to_json(const Instance& instance, const Assignment& assignment) {
  json placements = json::array();
  for (std::size_t t = 0; t < assignment.placements.size(); ++t) {
    const Placement& p = assignment.placements[t];
    placements.push_back({{"task_id", instance.tasks[t].id},
                          {"window", p.window + 1},
                          {"cluster", p.cluster + 1}});
  }
  return {{"placements", placements}, {"window_lengths_ms", assignment.window_lengths_ms}};
}

Assignment assignment_from_json(const Instance& instance, const json& doc) {
  std::map<int, std::size_t> index;
  for (std::size_t t = 0; t < instance.tasks.size(); ++t) index[instance.tasks[t].id] = t;

  const json& placements = require_array(doc, "placements", "");
  std::vector<std::optional<Placement>> found(instance.tasks.size());
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const std::string w = child("/placements", i);
    const json& p = placements[i];
    const int id = static_cast<int>(as_int(require(p, "task_id", w), child(w, "task_id")));
    auto it = index.find(id);
    if (it == index.end()) {
      throw InputError("assignment places task " + std::to_string(id) +
                       ", which the instance does not have");
    }
    if (found[it->second]) {
      throw InputError("assignment places task " + std::to_string(id) + " twice");
    }
    found[it->second] = Placement{
        static_cast<int>(as_int(require(p, "window", w), child(w, "window"))) - 1,
        static_cast<int>(as_int(require(p, "cluster", w), child(w, "cluster"))) - 1};
  }
  std::vector<Placement> out;
  for (std::size_t t = 0; t < found.size(); ++t) {
    if (!found[t]) {
      throw InputError("assignment does not place task " +
                       std::to_string(instance.tasks[t].id));
    }
    out.push_back(*found[t]);
  }
  require_structure(instance, out);

  auto it = doc.find("window_lengths_ms");
  if (it == doc.end()) return make_assignment(instance, std::move(out));
  Assignment a;
  a.placements = std::move(out);
  if (!it->is_array()) throw ParseError("/window_lengths_ms", "expected an array");
  for (std::size_t j = 0; j < it->size(); ++j) {
    a.window_lengths_ms.push_back(as_int((*it)[j], child("/window_lengths_ms", j)));
  }
  return a;
}

Assignment load_assignment(const Instance& instance, const std::filesystem::path& path) {
  json doc = read_json_file(path);
  // A search-result document carries the assignment under "assignment".
  if (doc.is_object() && !doc.contains("placements") && doc.contains("assignment")) {
    const json& inner = doc["assignment"];
    if (inner.is_null()) throw InputError(path.string() + " holds no assignment");
    return assignment_from_json(instance, inner);
  }
  return assignment_from_json(instance, doc);
}

json coefficients_to_json(const RegressionCoefficients& coefficients) {
  json clusters = json::array();
  for (std::size_t k = 0; k < coefficients.beta.size(); ++k) {
    clusters.push_back({{"cluster_id", static_cast<int>(k) + 1}, {"beta", coefficients.beta[k]}});
  }
  json doc = {{"clusters", clusters}};
  doc["r_squared"] = coefficients.r_squared ? json(*coefficients.r_squared) : json(nullptr);
  return doc;
}

RegressionCoefficients coefficients_from_json(const json& doc) {
  RegressionCoefficients c;
  const json& clusters = require_array(doc, "clusters", "");
  c.beta.resize(clusters.size());
  std::vector<bool> seen(clusters.size(), false);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const std::string w = child("/clusters", i);
    const long long id = as_int(require(clusters[i], "cluster_id", w), child(w, "cluster_id"));
    if (id < 1 || id > static_cast<long long>(clusters.size()) ||
        seen[static_cast<std::size_t>(id - 1)]) {
      throw ParseError(child(w, "cluster_id"), "cluster ids must be 1..n without repeats");
    }
    seen[static_cast<std::size_t>(id - 1)] = true;
    const json& beta = require_array(clusters[i], "beta", w);
    auto& out = c.beta[static_cast<std::size_t>(id - 1)];
    for (std::size_t d = 0; d < beta.size(); ++d) {
      out.push_back(as_double(beta[d], child(child(w, "beta"), d)));
    }
  }
  c.r_squared = optional_double(doc, "r_squared", "");
  return c;
}

RegressionCoefficients load_coefficients(const std::filesystem::path& path) {
  return coefficients_from_json(read_json_file(path));
}

json search_result_to_json(const Instance& instance, const SearchResult& result) {
  json doc = {{"status", to_string(result.status)},
              {"objective_value", result.objective_value},
              {"lower_bound", result.lower_bound},
              {"nodes_explored", result.nodes_explored},
              {"elapsed_ms", result.elapsed_ms}};
  doc["assignment"] = result.assignment ? assignment_to_json(instance, *result.assignment)
                                        : json(nullptr);
  return doc;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string line_ref(const CsvTable& t, std::size_t row) {
  return "line " + std::to_string(t.line_numbers[row]);
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  throw ParseError("line 1", "missing column '" + name + "'");
}

CsvTable read_csv(std::istream& in, const std::string& name) {
  CsvTable t;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ParseError(name + " line " + std::to_string(number),
                       "expected " + std::to_string(t.header.size()) + " cells, got " +
                           std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(number);
  }
  if (t.header.empty()) throw ParseError(name, "empty CSV document");
  return t;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  return read_csv(in, path.string());
}

double csv_double(const CsvTable& table, std::size_t row, std::size_t col) {
  const std::string& s = table.rows[row][col];
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(line_ref(table, row),
                   "column '" + table.header[col] + "' is not a number: '" + s + "'");
}

long long csv_int(const CsvTable& table, std::size_t row, std::size_t col) {
  const std::string& s = table.rows[row][col];
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line_ref(table, row),
                     "column '" + table.header[col] + "' is not an integer: '" + s + "'");
  }
  return v;
}

std::vector<Task> load_task_characteristics(std::istream& in, const Platform& platform) {
  const CsvTable t = read_csv(in, "characteristics");
  const std::size_t c_kernel = t.column("kernel");
  const std::size_t c_cluster = t.column("cluster_id");
  const std::size_t c_exec = t.column("exec_time_ms");
  const std::size_t c_a = t.column("activity_coef");
  const std::size_t c_b = t.column("offset_coef");
  const int m = platform.cluster_count();

  std::vector<Task> tasks;
  std::vector<std::vector<bool>> seen;
  std::map<std::string, std::size_t> by_name;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string& kernel = t.rows[r][c_kernel];
    auto [it, inserted] = by_name.emplace(kernel, tasks.size());
    if (inserted) {
      Task task;
      task.id = static_cast<int>(tasks.size()) + 1;
      task.name = kernel;
      task.per_cluster.resize(static_cast<std::size_t>(m));
      tasks.push_back(std::move(task));
      seen.emplace_back(static_cast<std::size_t>(m), false);
    }
    const long long cid = csv_int(t, r, c_cluster);
    if (cid < 1 || cid > m) throw ParseError(line_ref(t, r), "unknown cluster_id");
    const auto k = static_cast<std::size_t>(cid - 1);
    if (seen[it->second][k]) {
      throw ParseError(line_ref(t, r), "duplicate row for kernel '" + kernel + "'");
    }
    seen[it->second][k] = true;
    TaskOnCluster& tc = tasks[it->second].per_cluster[k];
    tc.exec_time_ms = csv_int(t, r, c_exec);
    tc.activity_coef = csv_double(t, r, c_a);
    tc.offset_coef = csv_double(t, r, c_b);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (int k = 0; k < m; ++k) {
      if (!seen[i][static_cast<std::size_t>(k)]) {
        throw ParseError("characteristics", "kernel '" + tasks[i].name +
                                                "' has no row for cluster " +
                                                std::to_string(k + 1));
      }
    }
  }
  return tasks;
}

std::vector<FitSample> load_fit_samples(std::istream& in, int cluster_count) {
  const CsvTable t = read_csv(in, "samples");
  const std::size_t c_len = t.column("interval_length_ms");
  const std::size_t c_power = t.column("measured_power_watts");
  std::vector<std::size_t> cols;
  for (int k = 1; k <= cluster_count; ++k) {
    cols.push_back(t.column("sum_a_k" + std::to_string(k)));
    cols.push_back(t.column("sum_b_k" + std::to_string(k)));
  }
  std::vector<FitSample> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    FitSample s;
    s.interval_length_ms = csv_int(t, r, c_len);
    s.measured_power_watts = csv_double(t, r, c_power);
    for (std::size_t c : cols) s.features.push_back(csv_double(t, r, c));
    out.push_back(std::move(s));
  }
  return out;
}

void save_fit_samples(const std::vector<FitSample>& samples, std::ostream& out) {
  const std::size_t dims = samples.empty() ? 0 : samples.front().features.size();
  out << "interval_length_ms,measured_power_watts";
  for (std::size_t c = 0; c < dims; ++c) {
    out << (c % 2 == 0 ? ",sum_a_k" : ",sum_b_k") << c / 2 + 1;
  }
  out << '\n';
  std::ostringstream row;
  row.precision(17);
  for (const FitSample& s : samples) {
    row.str("");
    row << s.interval_length_ms << ',' << s.measured_power_watts;
    for (double f : s.features) row << ',' << f;
    out << row.str() << '\n';
  }
}

}  // namespace thermosched
