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

#ifndef FA_LAB_METRICS_H_
#define FA_LAB_METRICS_H_

// Tabular experiment outputs and their on-disk formats.
//
// metrics.csv  scenario,rule,seed,step,t,error,residual_sq,align_loss,min_eig_A,trace_potential
// tracks.csv   scenario,rule,seed,step,t,track,value
// oracle.csv   scenario,seed,quantity,value
//
// Reals are written with %.17g, unset values as NA, LF line endings.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fa_lab {

inline constexpr std::string_view kMetricsHeader =
    "scenario,rule,seed,step,t,error,residual_sq,align_loss,min_eig_A,trace_potential";
inline constexpr std::string_view kTracksHeader = "scenario,rule,seed,step,t,track,value";
inline constexpr std::string_view kOracleHeader = "scenario,seed,quantity,value";

struct MetricsRow {
  std::string scenario;
  std::string rule;
  std::uint64_t seed = 0;
  long step = 0;
  double t = 0.0;
  double error = 0.0;
  double residual_sq = 0.0;
  std::optional<double> align_loss;
  std::optional<double> min_eig_a;
  std::optional<double> trace_potential;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

struct TrackRow {
  std::string scenario;
  std::string rule;
  std::uint64_t seed = 0;
  long step = 0;
  double t = 0.0;
  int track = 0;
  double value = 0.0;

  friend bool operator==(const TrackRow&, const TrackRow&) = default;
};

struct OracleRow {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string quantity;
  double value = 0.0;

  friend bool operator==(const OracleRow&, const OracleRow&) = default;
};

using MetricsTable = std::vector<MetricsRow>;
using TrackTable = std::vector<TrackRow>;
using OracleTable = std::vector<OracleRow>;

// Shortest-round-trip-safe text for a real ("%.17g"); "NA" for unset.
std::string FormatReal(double value);
std::string FormatReal(const std::optional<double>& value);

std::string WriteMetricsCsv(const MetricsTable& table);
MetricsTable ParseMetricsCsv(std::string_view text);

std::string WriteTracksCsv(const TrackTable& table);
TrackTable ParseTracksCsv(std::string_view text);

std::string WriteOracleCsv(const OracleTable& table);
OracleTable ParseOracleCsv(std::string_view text);

// Writes to a sibling temporary file and renames it over `path`. Creates
// parent directories.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace fa_lab

#endif  // FA_LAB_METRICS_H_
