/*
 Copyright 2026 The lkcert Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef LKCERT_IO_HPP
#define LKCERT_IO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace lkcert::io {

using nlohmann::json;

// Row-major nested arrays. Doubles round-trip exactly through json::dump.
json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j, const std::string& key);
json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j, const std::string& key);
// Also checks the length.
Eigen::VectorXd vector_from_json(const json& j, const std::string& key, int size);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& name);

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t h);

// Shortest decimal text that parses back to the same double.
std::string fmt_double(double v);

// Lines starting with '#' before the header carry metadata such as the
// config hash; they are kept verbatim without the marker.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 if absent
  // Value of a "key=value" comment, empty if absent.
  std::string meta(const std::string& key) const;
};

std::string csv_to_string(const CsvTable& t);
CsvTable csv_from_string(const std::string& text);

}  // namespace lkcert::io

#endif  // LKCERT_IO_HPP
