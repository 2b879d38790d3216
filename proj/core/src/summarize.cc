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
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace arena {
namespace {

using PairKey = std::pair<std::string, std::string>;  // (generator, discriminator)

// Mean match win rate per (generator, discriminator) pair.
std::map<PairKey, double> PairMeans(std::span<const MatchRecord> records) {
  std::map<PairKey, std::pair<double, int>> acc;
  for (const MatchRecord& r : records) {
    auto& [sum, count] = acc[{r.generator_id, r.discriminator_id}];
    sum += r.win_rate();
    ++count;
  }
  std::map<PairKey, double> out;
  for (const auto& [key, value] : acc) out[key] = value.first / value.second;
  return out;
}

void CheckSeries(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("correlation: series lengths differ");
  }
  if (xs.size() < 2) {
    throw std::invalid_argument("correlation: need at least two points");
  }
}

std::vector<double> AverageRanks(std::span<const double> xs) {
  std::vector<size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::string Num(double x) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return s.str();
}

std::string Label(const std::string& id,
                  const std::map<std::string, const PlayerSpec*>& by_id) {
  auto it = by_id.find(id);
  if (it != by_id.end() && it->second->iteration) {
    return std::to_string(*it->second->iteration);
  }
  return id;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::map<std::string, double> TournamentWinRate(
    std::span<const MatchRecord> records) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& [key, mean] : PairMeans(records)) {
    auto& [sum, count] = acc[key.first];
    sum += mean;
    ++count;
  }
  std::map<std::string, double> out;
  for (const auto& [id, value] : acc) out[id] = value.first / value.second;
  return out;
}

Heatmap MakeHeatmap(std::span<const MatchRecord> records,
                    std::vector<std::string> generators,
                    std::vector<std::string> discriminators) {
  const std::map<PairKey, double> means = PairMeans(records);
  Heatmap h;
  h.generators = std::move(generators);
  h.discriminators = std::move(discriminators);
  h.cells.assign(h.discriminators.size(),
                 std::vector<std::optional<double>>(h.generators.size()));
  for (size_t i = 0; i < h.discriminators.size(); ++i) {
    for (size_t j = 0; j < h.generators.size(); ++j) {
      auto it = means.find({h.generators[j], h.discriminators[i]});
      if (it != means.end()) h.cells[i][j] = it->second;
    }
  }
  return h;
}

std::vector<SkillCurve> SkillCurves(const std::map<std::string, Rating>& ratings,
                                    std::span<const PlayerSpec> players) {
  std::map<std::string, SkillCurve> series;
  for (const PlayerSpec& p : players) {
    if (p.role != Role::kGenerator || !p.iteration) continue;
    auto it = ratings.find(p.id);
    if (it == ratings.end()) continue;
    const std::string experiment = p.experiment.value_or("");
    SkillCurve& curve = series[experiment];
    curve.experiment = experiment;
    curve.points.push_back(
        {p.id, *p.iteration, it->second.rating, it->second.deviation});
  }
  std::vector<SkillCurve> out;
  for (auto& [name, curve] : series) {
    std::stable_sort(curve.points.begin(), curve.points.end(),
                     [](const CurvePoint& a, const CurvePoint& b) {
                       return a.iteration < b.iteration;
                     });
    out.push_back(std::move(curve));
  }
  return out;
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  CheckSeries(xs, ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("correlation of a constant series is undefined");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  CheckSeries(xs, ys);
  const std::vector<double> rx = AverageRanks(xs);
  const std::vector<double> ry = AverageRanks(ys);
  return Pearson(rx, ry);
}

bool IsFullRoundRobin(std::span<const MatchRecord> records) {
  if (records.empty()) return false;
  std::set<std::string> gens, discs;
  std::set<PairKey> pairs;
  for (const MatchRecord& r : records) {
    gens.insert(r.generator_id);
    discs.insert(r.discriminator_id);
    pairs.insert({r.generator_id, r.discriminator_id});
  }
  return pairs.size() == gens.size() * discs.size();
}

std::vector<PlayerSpec> SortForDisplay(std::span<const PlayerSpec> players) {
  std::vector<PlayerSpec> out(players.begin(), players.end());
  auto key = [](const PlayerSpec& p) {
    return std::make_tuple(p.experiment.value_or(""), !p.iteration.has_value(),
                           p.iteration.value_or(0), p.id);
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const PlayerSpec& a, const PlayerSpec& b) {
                     return key(a) < key(b);
                   });
  return out;
}

TournamentSummary Summarize(std::span<const MatchRecord> records,
                            const TournamentRatings& ratings,
                            std::span<const PlayerSpec> players) {
  std::vector<PlayerSpec> all(players.begin(), players.end());
  std::set<std::string> known;
  for (const PlayerSpec& p : all) known.insert(p.id);
  for (const MatchRecord& r : records) {
    if (known.insert(r.generator_id).second) {
      all.push_back({r.generator_id, Role::kGenerator, PlayerKind::kCustom, {}, {}});
    }
    if (known.insert(r.discriminator_id).second) {
      all.push_back(
          {r.discriminator_id, Role::kDiscriminator, PlayerKind::kCustom, {}, {}});
    }
  }

  TournamentSummary s;
  s.players = SortForDisplay(all);
  s.win_rate = TournamentWinRate(records);
  s.ratings = ratings.ratings;
  std::vector<std::string> gens, discs;
  for (const PlayerSpec& p : s.players) {
    (p.role == Role::kGenerator ? gens : discs).push_back(p.id);
  }
  s.heatmap = MakeHeatmap(records, std::move(gens), std::move(discs));
  s.curves = SkillCurves(s.ratings, s.players);
  s.full_round_robin = IsFullRoundRobin(records);
  s.warnings = ratings.warnings;
  if (!records.empty() && !s.full_round_robin) {
    s.warnings.push_back(
        "tournament win rates are not comparable: the schedule is not a full "
        "round-robin; use skill ratings instead");
  }
  return s;
}

void WriteSummaryCsv(std::ostream& out, const TournamentSummary& summary) {
  out << "id,experiment,iteration,role,rating,deviation,volatility,win_rate\n";
  for (const PlayerSpec& p : summary.players) {
    out << p.id << ',' << p.experiment.value_or("") << ','
        << (p.iteration ? std::to_string(*p.iteration) : "") << ','
        << ToString(p.role) << ',';
    auto r = summary.ratings.find(p.id);
    if (r != summary.ratings.end()) {
      out << Num(r->second.rating) << ',' << Num(r->second.deviation) << ','
          << Num(r->second.volatility) << ',';
    } else {
      out << ",,,";
    }
    auto w = summary.win_rate.find(p.id);
    if (w != summary.win_rate.end()) out << Num(w->second);
    out << '\n';
  }
}

void WriteSummaryTable(std::ostream& out, const TournamentSummary& summary) {
  size_t width = 2;
  for (const PlayerSpec& p : summary.players) width = std::max(width, p.id.size());
  out << std::left << std::setw(static_cast<int>(width)) << "id"
      << "  role           rating  deviation  win_rate\n";
  const auto flags = out.flags();
  for (const PlayerSpec& p : summary.players) {
    out << std::left << std::setw(static_cast<int>(width)) << p.id << "  "
        << std::setw(13) << ToString(p.role) << std::right << std::fixed;
    auto r = summary.ratings.find(p.id);
    if (r != summary.ratings.end()) {
      out << std::setprecision(1) << std::setw(8) << r->second.rating
          << std::setw(11) << r->second.deviation;
    } else {
      out << std::setw(8) << "-" << std::setw(11) << "-";
    }
    auto w = summary.win_rate.find(p.id);
    if (w != summary.win_rate.end()) {
      out << std::setprecision(3) << std::setw(10) << w->second;
    }
    out << '\n';
    out.flags(flags);
  }
  for (const std::string& w : summary.warnings) out << "warning: " << w << '\n';
}

void WriteHeatmapCsv(std::ostream& out, const Heatmap& heatmap,
                     std::span<const PlayerSpec> players) {
  std::map<std::string, const PlayerSpec*> by_id;
  for (const PlayerSpec& p : players) by_id[p.id] = &p;
  out << "discriminator\\generator";
  for (const std::string& g : heatmap.generators) out << ',' << Label(g, by_id);
  out << '\n';
  for (size_t i = 0; i < heatmap.discriminators.size(); ++i) {
    out << Label(heatmap.discriminators[i], by_id);
    for (const std::optional<double>& cell : heatmap.cells[i]) {
      out << ',';
      if (cell) out << Num(*cell);
    }
    out << '\n';
  }
}

void WriteHeatmapSvg(std::ostream& out, const Heatmap& heatmap,
                     const std::string& title) {
  constexpr int kCell = 12;
  constexpr int kMargin = 24;
  const int width = kMargin + kCell * static_cast<int>(heatmap.generators.size());
  const int height =
      kMargin + kCell * static_cast<int>(heatmap.discriminators.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<title>" << Escape(title) << "</title>\n";
  out << "<text x=\"" << kMargin << "\" y=\"12\" font-size=\"10\">"
      << Escape(title) << " (rows: discriminators, columns: generators)</text>\n";
  for (size_t i = 0; i < heatmap.discriminators.size(); ++i) {
    for (size_t j = 0; j < heatmap.generators.size(); ++j) {
      const std::optional<double>& cell = heatmap.cells[i][j];
      std::string fill = "#c0c0e0";
      if (cell) {
        const int v = static_cast<int>(std::lround(std::clamp(*cell, 0.0, 1.0) * 255));
        fill = "rgb(" + std::to_string(v) + "," + std::to_string(v) + "," +
               std::to_string(v) + ")";
      }
      out << "<rect x=\"" << kMargin + kCell * static_cast<int>(j) << "\" y=\""
          << kMargin + kCell * static_cast<int>(i) << "\" width=\"" << kCell
          << "\" height=\"" << kCell << "\" fill=\"" << fill << "\"><title>"
          << Escape(heatmap.generators[j]) << " vs "
          << Escape(heatmap.discriminators[i]);
      if (cell) out << ": " << Num(*cell);
      out << "</title></rect>\n";
    }
  }
  out << "</svg>\n";
}

void WriteCurvesSvg(std::ostream& out, const std::vector<SkillCurve>& curves,
                    const std::string& title) {
  constexpr double kWidth = 480, kHeight = 320, kMargin = 40;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#9467bd", "#ff7f0e", "#8c564b"};
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const SkillCurve& c : curves) {
    for (const CurvePoint& p : c.points) {
      x0 = std::min(x0, static_cast<double>(p.iteration));
      x1 = std::max(x1, static_cast<double>(p.iteration));
      y0 = std::min(y0, p.lower());
      y1 = std::max(y1, p.upper());
    }
  }
  if (!(x1 > x0)) {
    x0 = std::isfinite(x0) ? x0 - 1 : 0;
    x1 = x0 + 2;
  }
  if (!(y1 > y0)) {
    y0 = std::isfinite(y0) ? y0 - 1 : 0;
    y1 = y0 + 2;
  }
  auto px = [&](double x) {
    return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin);
  };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin);
  };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  out << "<title>" << Escape(title) << "</title>\n";
  out << "<text x=\"" << kMargin << "\" y=\"16\" font-size=\"12\">"
      << Escape(title) << "</text>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - 8
      << "\" font-size=\"10\">iteration " << Num(x0) << " .. " << Num(x1)
      << "; rating " << std::lround(y0) << " .. " << std::lround(y1)
      << "</text>\n";
  out << std::fixed << std::setprecision(2);
  size_t color = 0;
  for (const SkillCurve& c : curves) {
    const char* stroke = kColors[color++ % std::size(kColors)];
    out << "<polygon fill=\"" << stroke << "\" fill-opacity=\"0.15\" points=\"";
    for (const CurvePoint& p : c.points) out << px(p.iteration) << ',' << py(p.upper()) << ' ';
    for (auto it = c.points.rbegin(); it != c.points.rend(); ++it) {
      out << px(it->iteration) << ',' << py(it->lower()) << ' ';
    }
    out << "\"/>\n<polyline fill=\"none\" stroke=\"" << stroke << "\" points=\"";
    for (const CurvePoint& p : c.points) out << px(p.iteration) << ',' << py(p.rating) << ' ';
    out << "\"><title>" << Escape(c.experiment) << "</title></polyline>\n";
  }
  out << "</svg>\n";
}

}  // namespace arena
