/*
 * Copyright 2026 The EduKG Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "edukg/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "edukg/core_model.h"
#include "edukg/error.h"
#include "json.hpp"

namespace edukg {
namespace {

using nlohmann::json;

// Unbiased integer in [0, bound).
uint64_t Bounded(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

double Truncate(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::floor(value * scale + 1e-9) / scale;
}

std::vector<std::string_view> Lines(std::string_view content) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = Trim(content.substr(start, end - start));
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

double PrecisionAtK(const JudgedRanking& ranking, int k) {
  if (k < 1 || static_cast<size_t>(k) > ranking.items.size()) {
    throw Error(ErrorCode::kKOutOfRange,
                "k=" + std::to_string(k) + " outside [1, " +
                    std::to_string(ranking.items.size()) + "]");
  }
  int relevant = 0;
  for (int i = 0; i < k; ++i) relevant += ranking.items[i].relevant ? 1 : 0;
  return static_cast<double>(relevant) / k;
}

double ReciprocalRank(const JudgedRanking& ranking) {
  for (size_t i = 0; i < ranking.items.size(); ++i) {
    if (ranking.items[i].relevant) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

double MeanReciprocalRank(std::span<const JudgedRanking> rankings) {
  if (rankings.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "MRR over no rankings");
  }
  double sum = 0.0;
  for (const JudgedRanking& r : rankings) sum += ReciprocalRank(r);
  return sum / static_cast<double>(rankings.size());
}

double AveragePrecisionAtK(const JudgedRanking& ranking, int k) {
  if (k < 1) throw Error(ErrorCode::kKOutOfRange, "k must be >= 1");
  const size_t depth = std::min(ranking.items.size(), static_cast<size_t>(k));
  // sum of hits / position as num / den, rounded once at the end. Falls back
  // to long double if the fraction stops fitting in 64 bits.
  uint64_t num = 0;
  uint64_t den = 1;
  bool exact = true;
  long double approx = 0.0L;
  int hits = 0;
  for (size_t i = 0; i < depth; ++i) {
    if (!ranking.items[i].relevant) continue;
    ++hits;
    const uint64_t pos = i + 1;
    approx += static_cast<long double>(hits) / pos;
    if (!exact) continue;
    const uint64_t g = std::gcd(den, pos);
    uint64_t next_den = 0;
    uint64_t lhs = 0;
    uint64_t rhs = 0;
    if (__builtin_mul_overflow(den / g, pos, &next_den) ||
        __builtin_mul_overflow(num, pos / g, &lhs) ||
        __builtin_mul_overflow(static_cast<uint64_t>(hits), den / g, &rhs) ||
        __builtin_add_overflow(lhs, rhs, &num)) {
      exact = false;
      continue;
    }
    den = next_den;
    const uint64_t r = std::gcd(num, den);
    num /= r;
    den /= r;
  }
  if (hits == 0) return 0.0;
  constexpr uint64_t kExactDouble = uint64_t{1} << 53;
  uint64_t total_den = 0;
  if (exact &&
      !__builtin_mul_overflow(den, static_cast<uint64_t>(hits), &total_den) &&
      num <= kExactDouble && total_den <= kExactDouble) {
    return static_cast<double>(num) / static_cast<double>(total_den);
  }
  return static_cast<double>(approx / hits);
}

double MeanAveragePrecision(std::span<const JudgedRanking> rankings, int k) {
  if (k < 1) throw Error(ErrorCode::kKOutOfRange, "k must be >= 1");
  if (rankings.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "MAP over no rankings");
  }
  double sum = 0.0;
  for (const JudgedRanking& r : rankings) sum += AveragePrecisionAtK(r, k);
  return sum / static_cast<double>(rankings.size());
}

std::vector<JudgedRanking> ParseJudgedRankings(std::string_view content) {
  std::vector<JudgedRanking> rankings;
  for (std::string_view line : Lines(content)) {
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.contains("items") ||
        !record["items"].is_array()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "judged ranking line lacks an items list");
    }
    JudgedRanking ranking;
    ranking.id = record.value("id", std::to_string(rankings.size()));
    for (const json& item : record["items"]) {
      if (!item.contains("relevant") || !item["relevant"].is_boolean()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "judged item lacks a boolean 'relevant'");
      }
      ranking.items.push_back(
          JudgedItem{item.value("uri", ""), item["relevant"].get<bool>()});
    }
    if (ranking.items.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "judged ranking is empty");
    }
    rankings.push_back(std::move(ranking));
  }
  return rankings;
}

void SrsSession::AddJudgment(Judgment judgment) {
  if (judgment.value != 0 && judgment.value != 1) {
    throw Error(ErrorCode::kInvalidArgument, "judgment must be 0 or 1");
  }
  for (const Judgment& j : judgments_) {
    if (j.annotator == judgment.annotator &&
        j.triple_id == judgment.triple_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "annotator " + judgment.annotator + " already judged " +
                      judgment.triple_id);
    }
  }
  judgments_.push_back(std::move(judgment));
}

int SrsSession::accurate_count() const {
  int count = 0;
  for (const Judgment& j : judgments_) count += j.value;
  return count;
}

double SrsMean(const SrsSession& session) {
  if (session.judgments().empty()) {
    throw Error(ErrorCode::kEmptySession, "session has no judgments");
  }
  return static_cast<double>(session.accurate_count()) /
         static_cast<double>(session.judgments().size());
}

double NormalApproxHalfWidth(double mu, int n, double z) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  return z * std::sqrt(mu * (1.0 - mu) / n);
}

double MarginOfError(double variance, int n, double z) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  return z * std::sqrt(variance / n);
}

bool SrsShouldStop(const SrsSession& session) {
  return EstimateAccuracy(session).stop;
}

SrsEstimate EstimateAccuracy(const SrsSession& session) {
  SrsEstimate estimate;
  estimate.mu = SrsMean(session);
  estimate.n = static_cast<int>(session.judgments().size());
  estimate.half_width =
      NormalApproxHalfWidth(estimate.mu, estimate.n, session.z());
  estimate.moe =
      MarginOfError(estimate.mu * (1.0 - estimate.mu), estimate.n, session.z());
  estimate.stop = estimate.moe <= session.moe_threshold();
  return estimate;
}

std::string FormatEstimate(const SrsEstimate& estimate) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f ± %.3f", Truncate(estimate.mu, 2),
                Truncate(estimate.half_width, 3));
  return buffer;
}

std::string EstimateToJson(const SrsEstimate& estimate) {
  json doc = {
      {"mu", estimate.mu},
      {"n", estimate.n},
      {"half_width", estimate.half_width},
      {"moe", estimate.moe},
      {"interval",
       {estimate.mu - estimate.half_width, estimate.mu + estimate.half_width}},
      {"stop", estimate.stop},
      {"display", FormatEstimate(estimate)}};
  return doc.dump(2) + "\n";
}

std::vector<std::string> TriplePopulation(const EduKG& graph) {
  std::vector<std::string> triples;
  for (const auto& [key, edge] : graph.edges()) {
    if (key.kind != EdgeKind::kContains) continue;
    const Node* src = graph.FindNode(key.src);
    const Node* dst = graph.FindNode(key.dst);
    if (src == nullptr || dst == nullptr || dst->kind != NodeKind::kConcept) {
      continue;
    }
    if (src->kind != NodeKind::kSlide && src->kind != NodeKind::kMaterial) {
      continue;
    }
    triples.push_back(key.src + "|CONTAINS|" + key.dst);
  }
  return triples;
}

std::vector<std::string> SampleWithoutReplacement(
    std::span<const std::string> population, int n, uint64_t seed) {
  if (n < 0 || static_cast<size_t>(n) > population.size()) {
    throw Error(ErrorCode::kSampleTooLarge,
                "cannot draw " + std::to_string(n) + " of " +
                    std::to_string(population.size()) + " triples");
  }
  std::vector<std::string> pool(population.begin(), population.end());
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
    const size_t j = i + Bounded(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<size_t>(n));
  return pool;
}

std::vector<std::string> SampleTriples(const EduKG& graph, int n,
                                       uint64_t seed) {
  const std::vector<std::string> population = TriplePopulation(graph);
  return SampleWithoutReplacement(population, n, seed);
}

SrsSession ParseSession(std::string_view content, double z,
                        double moe_threshold) {
  SrsSession session(z, moe_threshold);
  for (std::string_view line : Lines(content)) {
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.contains("triple") ||
        !record.contains("judgment") ||
        !record["judgment"].is_number_integer()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "session record needs 'triple' and integer 'judgment'");
    }
    session.AddJudgment(Judgment{
        record["triple"].get<std::string>(), record.value("annotator", ""),
        record["judgment"].get<int>(), record.value("timestamp", "")});
  }
  return session;
}

std::string JudgmentToJsonLine(const Judgment& judgment) {
  return json{{"triple", judgment.triple_id},
              {"annotator", judgment.annotator},
              {"judgment", judgment.value},
              {"timestamp", judgment.timestamp}}
             .dump() +
         "\n";
}

}  // namespace edukg
