// Copyright 2026 The fa_lab Authors. All Rights Reserved.
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

#include "fa_lab/metrics.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fa_lab/error.h"

namespace fa_lab {
namespace {

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

[[noreturn]] void Malformed(std::string_view what, std::string_view line) {
  throw Error(ErrorCode::kConfig,
              "malformed " + std::string(what) + " row '" + std::string(line) + "'");
}

template <typename T>
T ParseField(std::string_view field, std::string_view line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) Malformed("CSV", line);
  return value;
}

double ParseReal(std::string_view field, std::string_view line) {
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  if (field == "nan" || field == "-nan") return std::numeric_limits<double>::quiet_NaN();
  return ParseField<double>(field, line);
}

std::optional<double> ParseOptional(std::string_view field, std::string_view line) {
  if (field == "NA") return std::nullopt;
  return ParseReal(field, line);
}

std::vector<std::string_view> Body(std::string_view text, std::string_view header,
                                   std::size_t columns) {
  std::vector<std::string_view> lines = SplitLines(text);
  if (lines.empty() || lines.front() != header) {
    throw Error(ErrorCode::kConfig, "expected header '" + std::string(header) + "'");
  }
  lines.erase(lines.begin());
  for (std::string_view line : lines) {
    if (SplitFields(line).size() != columns) Malformed("CSV", line);
  }
  return lines;
}

}  // namespace

std::string FormatReal(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string FormatReal(const std::optional<double>& value) {
  return value ? FormatReal(*value) : std::string("NA");
}

std::string WriteMetricsCsv(const MetricsTable& table) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const MetricsRow& row : table) {
    out += row.scenario + ',' + row.rule + ',' + std::to_string(row.seed) + ',' +
           std::to_string(row.step) + ',' + FormatReal(row.t) + ',' +
           FormatReal(row.error) + ',' + FormatReal(row.residual_sq) + ',' +
           FormatReal(row.align_loss) + ',' + FormatReal(row.min_eig_a) + ',' +
           FormatReal(row.trace_potential) + '\n';
  }
  return out;
}

MetricsTable ParseMetricsCsv(std::string_view text) {
  MetricsTable table;
  for (std::string_view line : Body(text, kMetricsHeader, 10)) {
    const auto f = SplitFields(line);
    MetricsRow row;
    row.scenario = std::string(f[0]);
    row.rule = std::string(f[1]);
    row.seed = ParseField<std::uint64_t>(f[2], line);
    row.step = ParseField<long>(f[3], line);
    row.t = ParseReal(f[4], line);
    row.error = ParseReal(f[5], line);
    row.residual_sq = ParseReal(f[6], line);
    row.align_loss = ParseOptional(f[7], line);
    row.min_eig_a = ParseOptional(f[8], line);
    row.trace_potential = ParseOptional(f[9], line);
    table.push_back(std::move(row));
  }
  return table;
}

std::string WriteTracksCsv(const TrackTable& table) {
  std::string out(kTracksHeader);
  out += '\n';
  for (const TrackRow& row : table) {
    out += row.scenario + ',' + row.rule + ',' + std::to_string(row.seed) + ',' +
           std::to_string(row.step) + ',' + FormatReal(row.t) + ',' +
           std::to_string(row.track) + ',' + FormatReal(row.value) + '\n';
  }
  return out;
}

TrackTable ParseTracksCsv(std::string_view text) {
  TrackTable table;
  for (std::string_view line : Body(text, kTracksHeader, 7)) {
    const auto f = SplitFields(line);
    table.push_back(TrackRow{std::string(f[0]), std::string(f[1]),
                             ParseField<std::uint64_t>(f[2], line),
                             ParseField<long>(f[3], line), ParseReal(f[4], line),
                             ParseField<int>(f[5], line), ParseReal(f[6], line)});
  }
  return table;
}

std::string WriteOracleCsv(const OracleTable& table) {
  std::string out(kOracleHeader);
  out += '\n';
  for (const OracleRow& row : table) {
    out += row.scenario + ',' + std::to_string(row.seed) + ',' + row.quantity + ',' +
           FormatReal(row.value) + '\n';
  }
  return out;
}

OracleTable ParseOracleCsv(std::string_view text) {
  OracleTable table;
  for (std::string_view line : Body(text, kOracleHeader, 4)) {
    const auto f = SplitFields(line);
    table.push_back(OracleRow{std::string(f[0]), ParseField<std::uint64_t>(f[1], line),
                              std::string(f[2]), ParseReal(f[3], line)});
  }
  return table;
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error(ErrorCode::kIo, "cannot create " + path.parent_path().string() +
                                      ": " + ec.message());
    }
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace fa_lab
