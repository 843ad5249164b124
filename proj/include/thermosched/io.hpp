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

// Document formats. JSON documents use 1-based window, cluster and task
// indices; unknown fields are ignored on load.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermosched/exact_search.hpp"
#include "thermosched/model.hpp"
#include "thermosched/power.hpp"

namespace thermosched {

// Malformed or schema-violating document. `where` is a JSON pointer or a
// "line N" location.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

nlohmann::json platform_to_json(const Platform& platform);
Platform platform_from_json(const nlohmann::json& doc, const std::string& where = "");

nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& doc);

Instance load_instance(std::istream& in);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, std::ostream& out);
void save_instance(const Instance& instance, const std::filesystem::path& path);

nlohmann::json assignment_to_json(const Instance& instance, const Assignment& assignment);
Assignment assignment_from_json(const Instance& instance, const nlohmann::json& doc);
Assignment load_assignment(const Instance& instance, const std::filesystem::path& path);

nlohmann::json coefficients_to_json(const RegressionCoefficients& coefficients);
RegressionCoefficients coefficients_from_json(const nlohmann::json& doc);
RegressionCoefficients load_coefficients(const std::filesystem::path& path);

nlohmann::json search_result_to_json(const Instance& instance, const SearchResult& result);

// Reads a whole file as JSON, mapping syntax errors to ParseError.
nlohmann::json read_json(std::istream& in, const std::string& name);
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json(const nlohmann::json& doc, std::ostream& out);

// Minimal CSV: comma separated, optional surrounding whitespace, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // source line of each row

  // Throws ParseError naming the missing column.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in, const std::string& name);
CsvTable read_csv_file(const std::filesystem::path& path);
double csv_double(const CsvTable& table, std::size_t row, std::size_t col);
long long csv_int(const CsvTable& table, std::size_t row, std::size_t col);

// `kernel,cluster_id,exec_time_ms,activity_coef,offset_coef`: one task per
// kernel, in order of first appearance. Every kernel needs a row for every
// platform cluster.
std::vector<Task> load_task_characteristics(std::istream& in, const Platform& platform);

// `interval_length_ms,measured_power_watts,sum_a_k1,sum_b_k1,...`
std::vector<FitSample> load_fit_samples(std::istream& in, int cluster_count);
void save_fit_samples(const std::vector<FitSample>& samples, std::ostream& out);

}  // namespace thermosched
