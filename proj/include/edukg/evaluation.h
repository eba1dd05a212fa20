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

// Ranking metrics over judged concept lists and Simple Random Sampling (SRS)
// accuracy estimation over graph triples.

#ifndef EDUKG_EVALUATION_H_
#define EDUKG_EVALUATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edukg/graph.h"

namespace edukg {

struct JudgedItem {
  std::string uri;
  bool relevant = false;
};

// Items in the order they were shown, most relevant first.
struct JudgedRanking {
  std::string id;
  std::vector<JudgedItem> items;
};

// Fraction of relevant items among the first k. Throws Error(kKOutOfRange)
// unless 1 <= k <= items.size().
double PrecisionAtK(const JudgedRanking& ranking, int k);

// 1 / rank of the first relevant item, 0 when none is relevant.
double ReciprocalRank(const JudgedRanking& ranking);
// Throws Error(kInvalidArgument) for an empty list.
double MeanReciprocalRank(std::span<const JudgedRanking> rankings);

// AP@k = (sum of P@i over relevant positions i <= k) / R, where R is the
// number of relevant items in the top k; 0 when R = 0.
double AveragePrecisionAtK(const JudgedRanking& ranking, int k);
double MeanAveragePrecision(std::span<const JudgedRanking> rankings, int k);

// JSON lines, one ranking per line:
// {"id": "...", "items": [{"uri": "...", "relevant": true}, ...]}
std::vector<JudgedRanking> ParseJudgedRankings(std::string_view content);

inline constexpr double kDefaultZ = 1.959964;
inline constexpr double kDefaultMoeThreshold = 0.05;

struct Judgment {
  std::string triple_id;
  std::string annotator;
  int value = 0;  // 1 = accurate, 0 = inaccurate
  std::string timestamp;
};

class SrsSession {
 public:
  SrsSession() = default;
  SrsSession(double z, double moe_threshold)
      : z_(z), moe_threshold_(moe_threshold) {}

  // Throws Error(kInvalidArgument) for a value other than 0/1 or a triple the
  // annotator already judged.
  void AddJudgment(Judgment judgment);

  std::vector<std::string> population;
  const std::vector<Judgment>& judgments() const { return judgments_; }
  double z() const { return z_; }
  double moe_threshold() const { return moe_threshold_; }
  int accurate_count() const;

 private:
  double z_ = kDefaultZ;
  double moe_threshold_ = kDefaultMoeThreshold;
  std::vector<Judgment> judgments_;
};

struct SrsEstimate {
  double mu = 0.0;
  int n = 0;
  double half_width = 0.0;
  double moe = 0.0;
  bool stop = false;
};

// Pooled over all annotators. Throws Error(kEmptySession).
double SrsMean(const SrsSession& session);
// z * sqrt(mu (1 - mu) / n).
double NormalApproxHalfWidth(double mu, int n, double z);
// z * sqrt(variance / n).
double MarginOfError(double variance, int n, double z);
// MoE with the Bernoulli variance mu (1 - mu) is at most the threshold.
bool SrsShouldStop(const SrsSession& session);
SrsEstimate EstimateAccuracy(const SrsSession& session);

// "0.40 ± 0.049": mean to two decimals and half-width to three, both
// truncated rather than rounded.
std::string FormatEstimate(const SrsEstimate& estimate);
std::string EstimateToJson(const SrsEstimate& estimate);

// Triple ids "<src>|CONTAINS|<dst>" of every slide->concept and
// material->concept edge, in graph order.
std::vector<std::string> TriplePopulation(const EduKG& graph);

// Uniform sample without replacement (partial Fisher-Yates over a 64-bit
// Mersenne Twister), deterministic for a seed. Throws Error(kSampleTooLarge).
std::vector<std::string> SampleWithoutReplacement(
    std::span<const std::string> population, int n, uint64_t seed);
std::vector<std::string> SampleTriples(const EduKG& graph, int n,
                                       uint64_t seed);

// Judgment session file: JSON lines
// {"triple": "...", "annotator": "...", "judgment": 0|1, "timestamp": "..."}.
SrsSession ParseSession(std::string_view content, double z = kDefaultZ,
                        double moe_threshold = kDefaultMoeThreshold);
std::string JudgmentToJsonLine(const Judgment& judgment);

}  // namespace edukg

#endif  // EDUKG_EVALUATION_H_
