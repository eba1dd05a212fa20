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

// Keyphrase extraction: candidate n-grams ranked by embedding similarity to
// the source text.

#ifndef EDUKG_KEYPHRASE_H_
#define EDUKG_KEYPHRASE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edukg/core_model.h"
#include "edukg/embedding.h"

namespace edukg {

// Keyphrases requested for one ranking call: factor x slides for the whole
// material in top-down mode, a fixed per-slide budget in bottom-up mode.
// Throws Error(kInvalidArgument) when num_slides < 1.
int KeyphraseBudget(int num_slides, PipelineMode mode,
                    int per_slide_budget = 15, int material_budget_factor = 15);

struct CandidatePhrase {
  std::string surface;
  int token_start = 0;
  int token_end = 0;  // exclusive
  double score = 0.0;

  int token_length() const { return token_end - token_start; }
};

struct CandidateOptions {
  int max_ngram = 4;
};

bool IsStopword(std::string_view token);

// Lowercased word n-grams (n <= max_ngram) that neither start nor end with a
// stopword and contain no digit-only token, deduplicated by surface in order
// of first occurrence. Tokens are maximal alphanumeric runs; sentence
// punctuation and line breaks end a phrase.
std::vector<CandidatePhrase> GenerateCandidates(
    std::string_view text, const CandidateOptions& options = {});

class KeyphraseRanker {
 public:
  virtual ~KeyphraseRanker() = default;
  // At most `budget` keyphrases with non-increasing scores.
  virtual std::vector<Keyphrase> Rank(std::string_view text, int budget,
                                      std::optional<int> origin_slide) = 0;
};

// Scores each candidate by the cosine between its embedding and the
// embedding of the whole text. Ties go to the longer phrase, then to the
// lexicographically smaller surface.
class EmbeddingRanker : public KeyphraseRanker {
 public:
  explicit EmbeddingRanker(EmbeddingProvider& embedder,
                           CandidateOptions options = {})
      : embedder_(embedder), options_(options) {}

  std::vector<Keyphrase> Rank(std::string_view text, int budget,
                              std::optional<int> origin_slide) override;

 private:
  EmbeddingProvider& embedder_;
  CandidateOptions options_;
};

std::vector<Keyphrase> RankKeyphrases(std::string_view text, int budget,
                                      EmbeddingProvider& embedder);

}  // namespace edukg

#endif  // EDUKG_KEYPHRASE_H_
