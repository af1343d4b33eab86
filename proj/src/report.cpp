// Copyright 2026 The holonomy Authors. All Rights Reserved.
//
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

#include "holo/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "holo/error.hpp"

namespace holo {
namespace {

std::string json_number(double value) { return std::isfinite(value) ? format_double(value) : "null"; }

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string matrix_json(const Matrix& m) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += r == 0 ? "[" : ", [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ", ";
      out += "[" + json_number(m(r, c).real()) + ", " + json_number(m(r, c).imag()) + "]";
    }
    out += "]";
  }
  return out + "]";
}

std::string holonomy_json(const Holonomy& h) {
  std::ostringstream out;
  out << "{\"loop_id\": \"" << h.loop_id << "\", \"level\": " << h.level << ", \"K\": " << h.steps
      << ", \"method\": \"" << to_string(h.method) << "\", \"defect\": " << json_number(h.defect)
      << ", \"unitary\": " << matrix_json(h.unitary) << "}";
  return out.str();
}

std::string curvature_json(const CurvatureTensor& f) {
  std::ostringstream out;
  out << "{\"level\": " << f.level() << ", \"point\": [";
  for (Eigen::Index i = 0; i < f.point().size(); ++i) out << (i ? ", " : "") << json_number(f.point()(i));
  out << "], \"components\": [";
  bool first = true;
  for (int mu = 0; mu < f.directions(); ++mu)
    for (int nu = mu + 1; nu < f.directions(); ++nu) {
      out << (first ? "" : ", ") << "{\"mu\": " << mu << ", \"nu\": " << nu << ", \"value\": " << matrix_json(f(mu, nu))
          << "}";
      first = false;
    }
  out << "]}";
  return out.str();
}

std::string convergence_csv(const std::vector<SweepRow>& rows) {
  if (rows.empty()) throw Error(ErrorKind::invalid_input, "empty sweep");
  std::string out = std::string(kSweepHeader) + "\n";
  for (const SweepRow& r : rows) {
    out += csv_field(r.model) + "," + csv_field(r.loop_id) + "," + format_double(r.total_time) + "," +
           std::to_string(r.integrator_steps) + "," + std::to_string(r.holonomy_steps) + "," +
           format_double(r.residual) + "," + format_double(r.leakage) + "," + format_double(r.ratio) + "\n";
  }
  return out;
}

void emit_convergence_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  write_text(path, convergence_csv(rows));
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::config, "cannot write " + path.string());
  file << content;
  if (!file.flush()) throw Error(ErrorKind::config, "cannot write " + path.string());
}

}  // namespace holo
