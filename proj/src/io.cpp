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
#include "lkcert/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lkcert/errors.hpp"

namespace lkcert::io {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& key) {
  if (!j.contains(key)) throw Error(ErrorKind::Format, "missing matrix \"" + key + "\"");
  const json& a = j.at(key);
  if (!a.is_array()) throw Error(ErrorKind::Format, "matrix \"" + key + "\" is not an array");
  const auto rows = static_cast<Eigen::Index>(a.size());
  Eigen::Index cols = -1;
  for (const auto& r : a) {
    if (!r.is_array()) throw Error(ErrorKind::Format, "matrix \"" + key + "\" has a non-array row");
    if (cols < 0) cols = static_cast<Eigen::Index>(r.size());
    if (static_cast<Eigen::Index>(r.size()) != cols) {
      throw Error(ErrorKind::Format, "matrix \"" + key + "\" is ragged");
    }
  }
  if (cols < 0) cols = 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (!v.is_number()) throw Error(ErrorKind::Format, "matrix \"" + key + "\" has a non-numeric entry");
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& key) {
  if (!j.contains(key)) throw Error(ErrorKind::Format, "missing vector \"" + key + "\"");
  const json& a = j.at(key);
  if (!a.is_array()) throw Error(ErrorKind::Format, "vector \"" + key + "\" is not an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw Error(ErrorKind::Format, "vector \"" + key + "\" has a non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& key, int size) {
  Eigen::VectorXd v = vector_from_json(j, key);
  if (v.size() != size) {
    throw Error(ErrorKind::Format, "vector \"" + key + "\" must have " + std::to_string(size) + " entries");
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Config, "cannot write " + path);
  out << content;
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return (std::filesystem::path(dir) / name).string();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return s;
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::string CsvTable::meta(const std::string& key) const {
  const std::string prefix = key + "=";
  for (const auto& c : comments) {
    if (c.compare(0, prefix.size(), prefix) == 0) return c.substr(prefix.size());
  }
  return {};
}

std::string csv_to_string(const CsvTable& t) {
  std::string out;
  for (const auto& c : t.comments) out += "# " + c + "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out += ',';
    out += t.header[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable csv_from_string(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] != '#') {
      have_header = true;
      break;
    }
    t.comments.push_back(line.substr(line.compare(0, 2, "# ") == 0 ? 2 : 1));
  }
  if (!have_header) throw Error(ErrorKind::Format, "empty CSV");
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(t.header.size());
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      double v = 0.0;
      const char* b = line.data() + start;
      const char* e = line.data() + end;
      auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc() || res.ptr != e) {
        throw Error(ErrorKind::Format, "bad number on CSV line " + std::to_string(lineno));
      }
      row.push_back(v);
      start = end + 1;
    }
    if (row.size() != t.header.size()) {
      throw Error(ErrorKind::Format, "wrong column count on CSV line " + std::to_string(lineno));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace lkcert::io
