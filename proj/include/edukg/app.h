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

// Configuration loading and the wiring of concrete service clients used by
// the command line tool and the review server.

#ifndef EDUKG_APP_H_
#define EDUKG_APP_H_

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "edukg/cache.h"
#include "edukg/core_model.h"
#include "edukg/embedding.h"
#include "edukg/expansion.h"
#include "edukg/graph_store.h"
#include "edukg/keyphrase.h"
#include "edukg/linker.h"
#include "edukg/pipelines.h"
#include "edukg/transport.h"
#include "edukg/weighting.h"

namespace edukg {

struct AppConfig {
  PipelineConfig pipeline;
  std::string spotlight_url = SpotlightOptions{}.endpoint;
  std::string sparql_url = SparqlOptions{}.endpoint;
  std::string wikipedia_url = WikipediaOptions{}.endpoint;
  // Empty selects the built-in hashing embedder.
  std::string embedding_url;
  std::string embedding_model = HttpEmbeddingOptions{}.model;
  size_t embedding_dimension = HttpEmbeddingOptions{}.dimension;
  // Offline transports: an entity table served in the services' formats, or
  // a recorded exchange file. Both empty means live HTTP.
  std::string knowledge_base;
  std::string replay;
  // Abstract and SPARQL caches; empty keeps them in memory.
  std::string cache_dir;
  // Graph store journal; empty disables it.
  std::string journal_dir;
};

using EnvLookup = std::function<const char*(const char*)>;

// JSON object whose keys are PipelineConfig and AppConfig field names.
// Relative paths are resolved against `base_dir`. Unknown keys throw
// Error(kInvalidArgument).
AppConfig ParseAppConfig(std::string_view content,
                         const std::string& base_dir = "");
// An empty path yields the defaults. Throws Error(kIo).
AppConfig LoadAppConfig(const std::string& path);
// EDUKG_SPOTLIGHT_URL, EDUKG_SPARQL_URL, EDUKG_WIKIPEDIA_URL and
// EDUKG_EMBEDDING_URL override the endpoints.
void ApplyEnvironment(AppConfig& config, const EnvLookup& lookup);

class ServiceBundle {
 public:
  explicit ServiceBundle(const AppConfig& config);

  PipelineServices services();
  const AppConfig& config() const { return config_; }
  GraphStore& store() { return store_; }

 private:
  AppConfig config_;
  std::unique_ptr<Transport> transport_;
  std::unique_ptr<Transport> embedding_transport_;
  std::unique_ptr<EmbeddingProvider> embedder_;
  PersistentCache abstract_cache_;
  PersistentCache sparql_cache_;
  EmbeddingRanker ranker_;
  SpotlightClient linker_;
  WikipediaAbstractSource abstracts_;
  LinkedDataClient linked_data_;
  GraphStore store_;
};

}  // namespace edukg

#endif  // EDUKG_APP_H_
