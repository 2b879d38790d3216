// Copyright 2026 The Arena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARENA_SUMMARIZE_H_
#define ARENA_SUMMARIZE_H_

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "arena/glicko.h"
#include "arena/records.h"

namespace arena {

// Per generator: mean match win rate against each discriminator (averaged
// over repeats first), then the unweighted mean over the discriminators it
// actually played. Generators without matches are absent.
std::map<std::string, double> TournamentWinRate(
    std::span<const MatchRecord> records);

// cells[i][j] is the mean win rate of gen_axis[j] against disc_axis[i], or
// empty if they never met.
struct Heatmap {
  std::vector<std::string> generators;
  std::vector<std::string> discriminators;
  std::vector<std::vector<std::optional<double>>> cells;
};

Heatmap MakeHeatmap(std::span<const MatchRecord> records,
                    std::vector<std::string> generators,
                    std::vector<std::string> discriminators);

struct CurvePoint {
  std::string id;
  int iteration = 0;
  double rating = 0.0;
  double deviation = 0.0;

  double lower() const { return rating - 2.0 * deviation; }
  double upper() const { return rating + 2.0 * deviation; }
};

struct SkillCurve {
  std::string experiment;
  std::vector<CurvePoint> points;  // sorted by iteration
};

// One series per experiment over the rated generators that carry iteration
// metadata. Players without an experiment label share the "" series.
std::vector<SkillCurve> SkillCurves(const std::map<std::string, Rating>& ratings,
                                    std::span<const PlayerSpec> players);

// Rank correlation with average ranks for ties. Throws std::invalid_argument
// on length mismatch, fewer than 2 points, or a constant series.
double Spearman(std::span<const double> xs, std::span<const double> ys);
// Same preconditions as Spearman.
double Pearson(std::span<const double> xs, std::span<const double> ys);

// True if every generator that appears met every discriminator that appears.
bool IsFullRoundRobin(std::span<const MatchRecord> records);

// Orders players by (experiment, iteration, id); players without an
// iteration sort after those with one.
std::vector<PlayerSpec> SortForDisplay(std::span<const PlayerSpec> players);

struct TournamentSummary {
  std::vector<PlayerSpec> players;  // display order
  std::map<std::string, double> win_rate;
  std::map<std::string, Rating> ratings;
  Heatmap heatmap;
  std::vector<SkillCurve> curves;
  bool full_round_robin = false;
  std::vector<std::string> warnings;
};

// Players that appear in `records` but not in `players` are added with
// default metadata.
TournamentSummary Summarize(std::span<const MatchRecord> records,
                            const TournamentRatings& ratings,
                            std::span<const PlayerSpec> players);

// Columns: id, experiment, iteration, role, rating, deviation, volatility,
// win_rate. Empty fields for unknown values.
void WriteSummaryCsv(std::ostream& out, const TournamentSummary& summary);
// Human-readable table for terminals.
void WriteSummaryTable(std::ostream& out, const TournamentSummary& summary);
// Header row and column carry checkpoint iterations (ids for players
// without one); unplayed cells are empty.
void WriteHeatmapCsv(std::ostream& out, const Heatmap& heatmap,
                     std::span<const PlayerSpec> players);
// Grayscale image, [0, 1] mapped linearly to black..white; unplayed cells
// are drawn in a neutral tint.
void WriteHeatmapSvg(std::ostream& out, const Heatmap& heatmap,
                     const std::string& title);
void WriteCurvesSvg(std::ostream& out, const std::vector<SkillCurve>& curves,
                    const std::string& title);

}  // namespace arena

#endif  // ARENA_SUMMARIZE_H_
