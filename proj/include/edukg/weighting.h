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

// Semantic weights of concepts, related concepts and categories.
//
// Every weight is a cosine similarity between two text embeddings: the
// concept's encyclopedia abstract against the material text (w_LM) or against
// one slide's text (w_Slide), and a category's name against the material
// text. The per-slide importance of a concept is w_Slide + w_LM.

#ifndef EDUKG_WEIGHTING_H_
#define EDUKG_WEIGHTING_H_

#include <atomic>
#include <string>
#include <string_view>

#include "edukg/cache.h"
#include "edukg/core_model.h"
#include "edukg/embedding.h"
#include "edukg/transport.h"

namespace edukg {

// Text-to-text cosine under `embedder`, with long-text chunking.
double TextSimilarity(std::string_view a, std::string_view b,
                      EmbeddingProvider& embedder);

double WeightConceptLm(const Concept& entity, const LearningMaterial& material,
                       EmbeddingProvider& embedder);
double WeightConceptSlide(const Concept& entity, const Slide& slide,
                          EmbeddingProvider& embedder);
// Throws Error(kInvalidArgument) for a blank name.
double WeightCategory(std::string_view category_name,
                      const LearningMaterial& material,
                      EmbeddingProvider& embedder);

inline double Importance(double w_slide, double w_lm) { return w_slide + w_lm; }

class AbstractSource {
 public:
  virtual ~AbstractSource() = default;
  // Plain-text article extract for a resource; "" when the article is
  // missing. Throws Error(kServiceUnavailable) after retries.
  virtual std::string FetchAbstract(const std::string& uri) = 0;
};

struct WikipediaOptions {
  std::string endpoint = "https://en.wikipedia.org/w/api.php";
  RetryPolicy retry;
  int max_in_flight = 4;
};

// Article title for a resource uri ("…/resource/Natural_language_processing"
// -> "Natural_language_processing").
std::string ArticleTitleFromUri(std::string_view uri);

// Fetches introductory extracts through the encyclopedia query API and keeps
// every answer, including misses, in a persistent cache keyed by uri.
class WikipediaAbstractSource : public AbstractSource {
 public:
  WikipediaAbstractSource(Transport& transport, WikipediaOptions options,
                          PersistentCache* cache = nullptr);
  std::string FetchAbstract(const std::string& uri) override;

  static HttpRequest BuildRequest(const std::string& endpoint,
                                  std::string_view title);
  // Throws Error(kMalformedResponse).
  static std::string ParseExtract(std::string_view body);

  size_t network_calls() const { return network_calls_.load(); }

 private:
  Transport& transport_;
  WikipediaOptions options_;
  PersistentCache own_cache_;
  PersistentCache* cache_;
  InFlightLimiter limiter_;
  std::atomic<size_t> network_calls_{0};
};

}  // namespace edukg

#endif  // EDUKG_WEIGHTING_H_
