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

#include "arena/summarize.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arena/glicko.h"
#include "gtest/gtest.h"

namespace arena {
namespace {

MatchRecord Rec(const std::string& g, const std::string& d, int n, int wins,
                std::uint64_t seed = 0) {
  MatchRecord r;
  r.generator_id = g;
  r.discriminator_id = d;
  r.n_fake = n;
  r.n_real = n;
  r.fake_wins = std::min(wins, n);
  r.real_wins = wins - r.fake_wins;
  r.seed = seed;
  return r;
}

PlayerSpec Spec(const std::string& id, Role role, std::optional<int> iteration,
                std::optional<std::string> experiment = std::nullopt) {
  return {id, role, PlayerKind::kCustom, iteration, experiment};
}

// Ranks with ties averaged, then the Pearson formula written out directly.
double BruteSpearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double w : v) {
        less += w < v[i];
        equal += w == v[i];
      }
      r[i] = less + (equal + 1) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(xs), ry = ranks(ys);
  const double n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(WinRateTest, MeanOverDiscriminators) {
  const std::vector<MatchRecord> records = {
      Rec("G", "D1", 5, 2), Rec("G", "D2", 5, 4), Rec("G", "D3", 5, 6)};
  EXPECT_NEAR(TournamentWinRate(records).at("G"), 0.4, 1e-15);
}

TEST(WinRateTest, SingleMatch) {
  const std::vector<MatchRecord> records = {Rec("G", "D", 64, 64)};
  EXPECT_EQ(TournamentWinRate(records).at("G"), 0.5);
}

TEST(WinRateTest, RepeatsAveragedPerPairFirst) {
  // Pair means 0.5 and 0.1; a flat mean over matches would give 0.2.
  const std::vector<MatchRecord> records = {
      Rec("G", "D1", 5, 0), Rec("G", "D1", 5, 10), Rec("G", "D2", 5, 1)};
  EXPECT_NEAR(TournamentWinRate(records).at("G"), 0.3, 1e-15);
  EXPECT_FALSE(TournamentWinRate(records).contains("D1"));
  EXPECT_FALSE(TournamentWinRate(records).contains("H"));
}

TEST(SpearmanTest, Examples) {
  const std::vector<double> a = {1, 2, 3, 4};
  const std::vector<double> b = {1, 3, 2, 4};
  const std::vector<double> rev = {4, 3, 2, 1};
  EXPECT_NEAR(Spearman(a, b), 0.8, 1e-15);
  EXPECT_NEAR(Spearman(a, b), BruteSpearman(a, b), 1e-15);
  EXPECT_EQ(Spearman(a, a), 1.0);
  EXPECT_EQ(Spearman(a, rev), -1.0);
}

TEST(SpearmanTest, AgreesWithBruteForceIncludingTies) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 10);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = static_cast<double>(rng() % 5);
      ys[i] = static_cast<double>(rng() % 5);
    }
    if (std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs[0]; }) ||
        std::all_of(ys.begin(), ys.end(), [&](double v) { return v == ys[0]; })) {
      EXPECT_THROW(Spearman(xs, ys), std::invalid_argument);
      continue;
    }
    const double rho = Spearman(xs, ys);
    EXPECT_NEAR(rho, BruteSpearman(xs, ys), 1e-12);
    EXPECT_GE(rho, -1.0);
    EXPECT_LE(rho, 1.0);
  }
}

TEST(SpearmanTest, Errors) {
  const std::vector<double> one = {1.0};
  const std::vector<double> two = {1.0, 2.0};
  const std::vector<double> three = {1.0, 2.0, 3.0};
  const std::vector<double> flat = {5.0, 5.0};
  EXPECT_THROW(Spearman(one, one), std::invalid_argument);
  EXPECT_THROW(Spearman(two, three), std::invalid_argument);
  EXPECT_THROW(Spearman(two, flat), std::invalid_argument);
  EXPECT_THROW(Pearson(flat, two), std::invalid_argument);
}

TEST(PearsonTest, LinearAndKnownValue) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {2, 4, 6, 8, 10};
  const std::vector<double> z = {2, 1, 4, 3, 5};
  EXPECT_NEAR(Pearson(x, y), 1.0, 1e-15);
  // cov = 8 / 5, var = 2, 2.
  EXPECT_NEAR(Pearson(x, z), 0.8, 1e-15);
}

std::vector<PlayerSpec> Aligned(int n) {
  std::vector<PlayerSpec> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(Spec("G" + std::to_string(10 + i), Role::kGenerator, i, "traj"));
    out.push_back(Spec("D" + std::to_string(10 + i), Role::kDiscriminator, i, "traj"));
  }
  return out;
}

std::vector<MatchRecord> BandedRecords(int n, int width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<MatchRecord> records;
  for (int g = 0; g < n; ++g) {
    for (int d = 0; d < n; ++d) {
      if (std::abs(g - d) > width) continue;
      for (int rep = 0; rep < 2; ++rep) {
        records.push_back(Rec("G" + std::to_string(10 + g), "D" + std::to_string(10 + d),
                              32, static_cast<int>(rng() % 65)));
      }
    }
  }
  return records;
}

TEST(HeatmapTest, MissingExactlyOutsideTheBand) {
  const int n = 7, width = 2;
  const auto records = BandedRecords(n, width, 1);
  std::vector<std::string> gens, discs;
  for (int i = 0; i < n; ++i) {
    gens.push_back("G" + std::to_string(10 + i));
    discs.push_back("D" + std::to_string(10 + i));
  }
  const Heatmap h = MakeHeatmap(records, gens, discs);
  ASSERT_EQ(h.cells.size(), discs.size());
  for (int d = 0; d < n; ++d) {
    ASSERT_EQ(h.cells[d].size(), gens.size());
    for (int g = 0; g < n; ++g) {
      EXPECT_EQ(h.cells[d][g].has_value(), std::abs(g - d) <= width);
    }
  }
  // Cells average the repeats.
  double expected = 0.0;
  for (const MatchRecord& r : records) {
    if (r.generator_id == "G13" && r.discriminator_id == "D12") expected += r.win_rate() / 2;
  }
  EXPECT_NEAR(*h.cells[2][3], expected, 1e-15);
}

TEST(HeatmapTest, WinRateIsMeanOfDefinedCells) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MatchRecord> records;
    const int ng = 1 + static_cast<int>(rng() % 6);
    const int nd = 1 + static_cast<int>(rng() % 6);
    std::vector<std::string> gens, discs;
    for (int g = 0; g < ng; ++g) gens.push_back("G" + std::to_string(g));
    for (int d = 0; d < nd; ++d) discs.push_back("D" + std::to_string(d));
    for (int g = 0; g < ng; ++g) {
      for (int d = 0; d < nd; ++d) {
        const int reps = static_cast<int>(rng() % 3);
        for (int r = 0; r < reps; ++r) {
          records.push_back(Rec(gens[g], discs[d], 1 + static_cast<int>(rng() % 50), 0));
          MatchRecord& rec = records.back();
          rec.fake_wins = static_cast<int>(rng() % (rec.n_fake + 1));
          rec.real_wins = static_cast<int>(rng() % (rec.n_real + 1));
        }
      }
    }
    const auto rates = TournamentWinRate(records);
    const Heatmap h = MakeHeatmap(records, gens, discs);
    for (int g = 0; g < ng; ++g) {
      double sum = 0.0;
      int defined = 0;
      for (int d = 0; d < nd; ++d) {
        if (h.cells[d][g]) {
          sum += *h.cells[d][g];
          ++defined;
        }
      }
      if (defined == 0) {
        EXPECT_FALSE(rates.contains(gens[g]));
      } else {
        EXPECT_NEAR(rates.at(gens[g]), sum / defined, 1e-12);
      }
    }
  }
}

TEST(SkillCurveTest, SeriesPerExperimentSortedByIteration) {
  std::map<std::string, Rating> ratings = {
      {"a2", {1600, 40, 0.06}}, {"a0", {1400, 50, 0.06}}, {"a1", {1500, 45, 0.06}},
      {"b0", {1450, 60, 0.06}}, {"d0", {1500, 30, 0.06}}};
  const std::vector<PlayerSpec> players = {
      Spec("a2", Role::kGenerator, 2, "A"), Spec("a0", Role::kGenerator, 0, "A"),
      Spec("a1", Role::kGenerator, 1, "A"), Spec("b0", Role::kGenerator, 7, "B"),
      Spec("d0", Role::kDiscriminator, 0, "A")};
  const auto curves = SkillCurves(ratings, players);
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[0].experiment, "A");
  ASSERT_EQ(curves[0].points.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(curves[0].points[i].iteration, i);
  EXPECT_EQ(curves[0].points[2].lower(), 1520.0);
  EXPECT_EQ(curves[0].points[2].upper(), 1680.0);
  EXPECT_EQ(curves[1].experiment, "B");
  EXPECT_EQ(curves[1].points.size(), 1u);
}

TEST(SummaryTest, FullRoundRobinDetection) {
  EXPECT_FALSE(IsFullRoundRobin({}));
  const auto full = BandedRecords(4, 10, 2);
  const auto banded = BandedRecords(4, 1, 2);
  EXPECT_TRUE(IsFullRoundRobin(full));
  EXPECT_FALSE(IsFullRoundRobin(banded));
}

TEST(SummaryTest, WinRateWarningOnlyWhenNotRoundRobin) {
  const auto players = Aligned(4);
  for (int width : {1, 10}) {
    const auto records = BandedRecords(4, width, 3);
    const TournamentSummary s =
        Summarize(records, RateTournament(records, RatingConfig{}), players);
    const bool warned = std::any_of(s.warnings.begin(), s.warnings.end(),
                                    [](const std::string& w) {
                                      return w.find("win rates are not comparable") !=
                                             std::string::npos;
                                    });
    EXPECT_EQ(warned, width < 3) << width;
    EXPECT_EQ(s.full_round_robin, width >= 3);
  }
}

TEST(SummaryTest, WritersAreDeterministicAndComplete) {
  const auto players = Aligned(3);
  const auto records = BandedRecords(3, 1, 4);
  const TournamentSummary s =
      Summarize(records, RateTournament(records, RatingConfig{}), players);
  std::ostringstream csv1, csv2, heat, svg, curves, table;
  WriteSummaryCsv(csv1, s);
  WriteSummaryCsv(csv2, s);
  const std::string csv = csv1.str();
  EXPECT_EQ(csv, csv2.str());
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  WriteHeatmapCsv(heat, s.heatmap, s.players);
  const std::string heat_csv = heat.str();
  EXPECT_EQ(std::count(heat_csv.begin(), heat_csv.end(), '\n'), 4);
  WriteHeatmapSvg(svg, s.heatmap, "t");
  WriteCurvesSvg(curves, s.curves, "t");
  for (const std::string& doc : {svg.str(), curves.str()}) {
    EXPECT_EQ(doc.rfind("<svg", 0), 0u);
    EXPECT_NE(doc.find("</svg>"), std::string::npos);
  }
  WriteSummaryTable(table, s);
  EXPECT_NE(table.str().find("warning:"), std::string::npos);
  // Round-trip of a rating through the csv keeps every bit.
  const std::string line = csv.substr(csv.find("\nG10,") + 1);
  std::vector<std::string> fields;
  std::stringstream ss(line.substr(0, line.find('\n')));
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  ASSERT_GE(fields.size(), 5u);
  EXPECT_EQ(std::stod(fields[4]), s.ratings.at("G10").rating);
}

TEST(SortForDisplayTest, OrdersByExperimentThenIteration) {
  const std::vector<PlayerSpec> players = {
      Spec("x10", Role::kGenerator, 10, "B"), Spec("x2", Role::kGenerator, 2, "B"),
      Spec("real", Role::kGenerator, std::nullopt), Spec("y", Role::kGenerator, 0, "A")};
  const auto sorted = SortForDisplay(players);
  std::vector<std::string> ids;
  for (const auto& p : sorted) ids.push_back(p.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"real", "y", "x2", "x10"}));
}

}  // namespace
}  // namespace arena
