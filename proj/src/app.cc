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

#include "edukg/app.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "edukg/error.h"
#include "edukg/knowledge_base.h"
#include "json.hpp"

namespace edukg {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) {
    return path;
  }
  return (fs::path(base_dir) / path).string();
}

template <typename T>
void Read(const json& doc, const char* key, T& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

std::unique_ptr<Transport> MakeTransport(const AppConfig& config) {
  if (!config.knowledge_base.empty()) {
    return std::make_unique<SimulatedKnowledgeBase>(
        SimulatedKnowledgeBase::FromFile(config.knowledge_base));
  }
  if (!config.replay.empty()) {
    return std::make_unique<ReplayTransport>(
        ReplayTransport::FromFile(config.replay));
  }
  return std::make_unique<LiveTransport>();
}

std::string CachePath(const AppConfig& config, const char* name) {
  if (config.cache_dir.empty()) return "";
  fs::create_directories(config.cache_dir);
  return (fs::path(config.cache_dir) / name).string();
}

std::unique_ptr<EmbeddingProvider> MakeEmbedder(const AppConfig& config,
                                                Transport& transport) {
  if (config.embedding_url.empty()) return std::make_unique<HashEmbedder>();
  HttpEmbeddingOptions options;
  options.endpoint = config.embedding_url;
  options.model = config.embedding_model;
  options.dimension = config.embedding_dimension;
  return std::make_unique<HttpEmbeddingProvider>(transport, options);
}

SpotlightOptions SpotlightOptionsFor(const AppConfig& config) {
  SpotlightOptions options;
  options.endpoint = config.spotlight_url;
  return options;
}

WikipediaOptions WikipediaOptionsFor(const AppConfig& config) {
  WikipediaOptions options;
  options.endpoint = config.wikipedia_url;
  return options;
}

SparqlOptions SparqlOptionsFor(const AppConfig& config) {
  SparqlOptions options;
  options.endpoint = config.sparql_url;
  return options;
}

}  // namespace

AppConfig ParseAppConfig(std::string_view content,
                         const std::string& base_dir) {
  json doc = json::parse(content, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "config is not a JSON object");
  }
  static const std::set<std::string> kKeys = {"mode",
                                              "per_slide_budget",
                                              "material_budget_factor",
                                              "linker_support",
                                              "linker_confidence",
                                              "related_weight_floor",
                                              "category_weight_floor",
                                              "related_cap_per_concept",
                                              "spotlight_url",
                                              "sparql_url",
                                              "wikipedia_url",
                                              "embedding_url",
                                              "embedding_model",
                                              "embedding_dimension",
                                              "knowledge_base",
                                              "replay",
                                              "cache_dir",
                                              "journal_dir"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown config key " + key);
    }
  }
  AppConfig config;
  try {
    PipelineConfig& p = config.pipeline;
    if (doc.contains("mode")) {
      p.mode = ParsePipelineMode(doc["mode"].get<std::string>());
    }
    Read(doc, "per_slide_budget", p.per_slide_budget);
    Read(doc, "material_budget_factor", p.material_budget_factor);
    Read(doc, "linker_support", p.linker_support);
    Read(doc, "linker_confidence", p.linker_confidence);
    Read(doc, "related_weight_floor", p.related_weight_floor);
    Read(doc, "category_weight_floor", p.category_weight_floor);
    Read(doc, "related_cap_per_concept", p.related_cap_per_concept);
    Read(doc, "spotlight_url", config.spotlight_url);
    Read(doc, "sparql_url", config.sparql_url);
    Read(doc, "wikipedia_url", config.wikipedia_url);
    Read(doc, "embedding_url", config.embedding_url);
    Read(doc, "embedding_model", config.embedding_model);
    Read(doc, "embedding_dimension", config.embedding_dimension);
    Read(doc, "knowledge_base", config.knowledge_base);
    Read(doc, "replay", config.replay);
    Read(doc, "cache_dir", config.cache_dir);
    Read(doc, "journal_dir", config.journal_dir);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("config field has the wrong type: ") + e.what());
  }
  config.knowledge_base = Resolve(base_dir, config.knowledge_base);
  config.replay = Resolve(base_dir, config.replay);
  config.cache_dir = Resolve(base_dir, config.cache_dir);
  config.journal_dir = Resolve(base_dir, config.journal_dir);
  config.pipeline.Validate();
  return config;
}

AppConfig LoadAppConfig(const std::string& path) {
  if (path.empty()) return AppConfig{};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseAppConfig(buffer.str(), fs::path(path).parent_path().string());
}

void ApplyEnvironment(AppConfig& config, const EnvLookup& lookup) {
  const std::pair<const char*, std::string*> overrides[] = {
      {"EDUKG_SPOTLIGHT_URL", &config.spotlight_url},
      {"EDUKG_SPARQL_URL", &config.sparql_url},
      {"EDUKG_WIKIPEDIA_URL", &config.wikipedia_url},
      {"EDUKG_EMBEDDING_URL", &config.embedding_url}};
  for (const auto& [name, field] : overrides) {
    const char* value = lookup(name);
    if (value != nullptr && *value != '\0') *field = value;
  }
}

ServiceBundle::ServiceBundle(const AppConfig& config)
    : config_(config),
      transport_(MakeTransport(config_)),
      embedding_transport_(std::make_unique<LiveTransport>()),
      embedder_(MakeEmbedder(config_, *embedding_transport_)),
      abstract_cache_(CachePath(config_, "abstracts.jsonl")),
      sparql_cache_(CachePath(config_, "sparql.jsonl")),
      ranker_(*embedder_),
      linker_(*transport_, SpotlightOptionsFor(config_)),
      abstracts_(*transport_, WikipediaOptionsFor(config_), &abstract_cache_),
      linked_data_(*transport_, SparqlOptionsFor(config_), &sparql_cache_),
      store_(config_.journal_dir) {}

PipelineServices ServiceBundle::services() {
  return PipelineServices{ranker_,    linker_,      abstracts_,
                          *embedder_, linked_data_, store_};
}

}  // namespace edukg
