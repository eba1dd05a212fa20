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

// One-hop concept expansion through a SPARQL endpoint: related resources via
// the wiki-page-link predicate and categories via the subject predicate.

#ifndef EDUKG_EXPANSION_H_
#define EDUKG_EXPANSION_H_

#include <atomic>
#include <string>
#include <string_view>
#include <vector>

#include "edukg/cache.h"
#include "edukg/core_model.h"
#include "edukg/embedding.h"
#include "edukg/graph.h"
#include "edukg/run_log.h"
#include "edukg/transport.h"
#include "edukg/weighting.h"

namespace edukg {

inline constexpr char kWikiPageLinkPredicate[] =
    "http://dbpedia.org/ontology/wikiPageWikiLink";
inline constexpr char kSubjectPredicate[] = "http://purl.org/dc/terms/subject";

struct SparqlOptions {
  std::string endpoint = "https://dbpedia.org/sparql";
  RetryPolicy retry;
  int max_in_flight = 4;
};

std::string RelatedQuery(std::string_view uri, int cap);
std::string CategoryQuery(std::string_view uri);

// Values bound to `variable` in a SPARQL JSON results document, in order.
// Throws Error(kMalformedResponse).
std::vector<std::string> ParseSparqlBindings(std::string_view body,
                                             std::string_view variable);

class LinkedDataClient {
 public:
  LinkedDataClient(Transport& transport, SparqlOptions options = {},
                   PersistentCache* cache = nullptr);

  // Throws Error(kInvalidArgument) for cap < 1.
  std::vector<std::string> FetchRelated(const std::string& uri, int cap);
  std::vector<std::string> FetchCategories(const std::string& uri);

  static HttpRequest BuildRequest(const std::string& endpoint,
                                  const std::string& query);
  size_t network_calls() const { return network_calls_.load(); }

 private:
  std::vector<std::string> RunQuery(const std::string& query,
                                    std::string_view variable);

  Transport& transport_;
  SparqlOptions options_;
  PersistentCache own_cache_;
  PersistentCache* cache_;
  InFlightLimiter limiter_;
  std::atomic<size_t> network_calls_{0};
};

struct ExpansionServices {
  LinkedDataClient& linked_data;
  AbstractSource& abstracts;
  EmbeddingProvider& embedder;
  int max_parallel = 4;
};

struct ExpansionStats {
  int main_concepts = 0;
  int related_added = 0;
  int related_pruned = 0;
  int categories_added = 0;
  int categories_pruned = 0;
  int failures = 0;
};

// Adds related concepts (weighted like w_LM, kept at weight >= the related
// floor) and categories (name vs material text, kept at weight >= the
// category floor) for every main concept of `graph`. Existing nodes and edges
// are never changed; fetch failures are logged and skipped.
EduKG ExpandGraph(const EduKG& graph, const LearningMaterial& material,
                  const PipelineConfig& config, ExpansionServices services,
                  RunLog* log = nullptr, ExpansionStats* stats = nullptr);

}  // namespace edukg

#endif  // EDUKG_EXPANSION_H_
