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

#include "edukg/pipelines.h"

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "edukg/error.h"
#include "json.hpp"

namespace edukg {
namespace {

void FetchAbstracts(std::vector<Concept>& concepts, AbstractSource& source,
                    RunLog& log) {
  for (Concept& c : concepts) {
    try {
      c.abstract = source.FetchAbstract(c.uri);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kServiceUnavailable &&
          e.code() != ErrorCode::kMalformedResponse) {
        throw;
      }
      log.Warn("abstract of " + c.uri + " unavailable: " + e.what());
      c.abstract.clear();
    }
  }
}

// Cosine of every concept abstract against `text`, in one embedding call.
std::vector<double> WeighAbstracts(const std::vector<Concept>& concepts,
                                   const std::string& text,
                                   EmbeddingProvider& embedder) {
  std::vector<std::string> texts;
  texts.reserve(concepts.size() + 1);
  texts.push_back(text);
  for (const Concept& c : concepts) texts.push_back(c.abstract);
  const std::vector<EmbeddingVector> vectors = EmbedTexts(embedder, texts);
  std::vector<double> weights;
  weights.reserve(concepts.size());
  for (size_t i = 0; i < concepts.size(); ++i) {
    weights.push_back(Cosine(vectors[i + 1], vectors[0]));
  }
  return weights;
}

void CheckMaterial(const LearningMaterial& material,
                   const PipelineConfig& config) {
  if (material.slides.empty()) {
    throw Error(ErrorCode::kEmptyMaterial,
                "material " + material.id + " has no slides");
  }
  config.Validate();
}

std::string SlideEvent(std::string_view stage, int page) {
  return std::string(stage) + ":slide:" + std::to_string(page);
}

// Runs `process` for one slide; a failure is retried once, then the slide is
// committed without concepts and a warning is recorded.
void ProcessSlideWithRetry(
    const Slide& slide, PipelineServices& services,
    const std::string& material_id, RunLog& log, RunReport& report,
    const std::function<std::vector<Concept>()>& process) {
  for (int attempt = 1; attempt <= 2; ++attempt) {
    try {
      std::vector<Concept> concepts = process();
      services.store.UpsertSlideSubgraph(material_id, slide.page_index,
                                         concepts);
      return;
    } catch (const Error& e) {
      log.Warn("slide " + std::to_string(slide.page_index) + " attempt " +
               std::to_string(attempt) + " failed: " + e.what());
    }
  }
  ++report.skipped_slides;
  services.store.UpsertSlideSubgraph(material_id, slide.page_index, {});
}

void RunExpansion(const LearningMaterial& material, PipelineServices& services,
                  const PipelineConfig& config, EmbeddingProvider& embedder,
                  RunLog& log, RunReport& report) {
  log.Event("expansion");
  ++report.expansion_runs;
  const auto snapshot = services.store.Snapshot(material.id);
  EduKG expanded = ExpandGraph(
      *snapshot, material, config,
      ExpansionServices{services.linked_data, services.abstracts, embedder},
      &log, &report.expansion);
  services.store.Commit(material.id,
                        [&](EduKG& graph) { graph = std::move(expanded); });
}

PipelineResult Finish(const LearningMaterial& material,
                      PipelineServices& services, RunLog& log,
                      RunReport report) {
  PipelineResult result;
  result.graph = *services.store.Snapshot(material.id);
  report.nodes = result.graph.node_count();
  report.edges = result.graph.edge_count();
  report.warnings = log.warnings();
  report.events = log.events();
  result.report = std::move(report);
  return result;
}

}  // namespace

std::string RunReport::ToJson() const {
  nlohmann::json doc = {
      {"mode", PipelineModeName(mode)},
      {"num_slides", num_slides},
      {"material_keyphrase_budget", material_keyphrase_budget},
      {"material_keyphrases", material_keyphrases},
      {"slide_keyphrase_budget", slide_keyphrase_budget},
      {"slide_keyphrases", slide_keyphrases},
      {"main_concepts", main_concepts},
      {"discarded_slide_concepts", discarded_slide_concepts},
      {"skipped_slides", skipped_slides},
      {"expansion_runs", expansion_runs},
      {"expansion",
       {{"related_added", expansion.related_added},
        {"related_pruned", expansion.related_pruned},
        {"categories_added", expansion.categories_added},
        {"categories_pruned", expansion.categories_pruned},
        {"failures", expansion.failures}}},
      {"nodes", nodes},
      {"edges", edges},
      {"warnings", warnings},
      {"events", events}};
  return doc.dump(2) + "\n";
}

PipelineResult RunTopDown(const LearningMaterial& material,
                          PipelineServices services,
                          const PipelineConfig& config,
                          const RunOptions& options) {
  CheckMaterial(material, config);
  RunLog own_log;
  RunLog& log = options.log != nullptr ? *options.log : own_log;
  CachingEmbedder embedder(services.embedder);

  RunReport report;
  report.mode = PipelineMode::kTopDown;
  report.num_slides = material.num_slides();
  report.slide_keyphrases.assign(material.slides.size(), 0);
  report.material_keyphrase_budget =
      KeyphraseBudget(material.num_slides(), PipelineMode::kTopDown,
                      config.per_slide_budget, config.material_budget_factor);
  report.slide_keyphrase_budget = config.per_slide_budget;
  services.store.RegisterMaterial(material);

  log.Event("rank:material");
  const std::vector<Keyphrase> keyphrases = services.ranker.Rank(
      material.full_text, report.material_keyphrase_budget, std::nullopt);
  report.material_keyphrases = static_cast<int>(keyphrases.size());
  std::vector<Concept> main_concepts =
      services.linker.LinkKeyphrases(keyphrases, config, &log);
  FetchAbstracts(main_concepts, services.abstracts, log);
  const std::vector<double> w_lm =
      WeighAbstracts(main_concepts, material.full_text, embedder);
  std::map<std::string, Concept> by_uri;
  for (size_t i = 0; i < main_concepts.size(); ++i) {
    main_concepts[i].SetMaterialWeight(w_lm[i]);
    by_uri.emplace(main_concepts[i].uri, main_concepts[i]);
  }
  report.main_concepts = static_cast<int>(main_concepts.size());
  services.store.UpsertMaterialConcepts(material.id, main_concepts);

  for (const Slide& slide : material.slides) {
    ProcessSlideWithRetry(slide, services, material.id, log, report, [&]() {
      log.Event(SlideEvent("rank", slide.page_index));
      const auto slide_keyphrases = services.ranker.Rank(
          slide.text, config.per_slide_budget, slide.page_index);
      report.slide_keyphrases[slide.page_index] =
          static_cast<int>(slide_keyphrases.size());
      std::vector<Concept> attached;
      for (const Concept& shell :
           services.linker.LinkKeyphrases(slide_keyphrases, config, &log)) {
        auto it = by_uri.find(shell.uri);
        if (it == by_uri.end()) {
          ++report.discarded_slide_concepts;
          continue;
        }
        attached.push_back(it->second);
      }
      const std::vector<double> w_slide =
          WeighAbstracts(attached, slide.text, embedder);
      for (size_t i = 0; i < attached.size(); ++i) {
        attached[i].SetSlideWeight(slide.page_index, w_slide[i]);
      }
      return attached;
    });
    log.Event(SlideEvent("commit", slide.page_index));
  }

  if (options.expand) {
    RunExpansion(material, services, config, embedder, log, report);
  }
  return Finish(material, services, log, std::move(report));
}

PipelineResult RunBottomUp(const LearningMaterial& material,
                           PipelineServices services,
                           const PipelineConfig& config,
                           const RunOptions& options) {
  CheckMaterial(material, config);
  RunLog own_log;
  RunLog& log = options.log != nullptr ? *options.log : own_log;
  CachingEmbedder embedder(services.embedder);

  RunReport report;
  report.mode = PipelineMode::kBottomUp;
  report.num_slides = material.num_slides();
  report.slide_keyphrases.assign(material.slides.size(), 0);
  report.slide_keyphrase_budget =
      KeyphraseBudget(material.num_slides(), PipelineMode::kBottomUp,
                      config.per_slide_budget, config.material_budget_factor);
  services.store.RegisterMaterial(material);

  auto analyze = [&](const Slide& slide) {
    log.Event(SlideEvent("rank", slide.page_index));
    const auto keyphrases = services.ranker.Rank(
        slide.text, report.slide_keyphrase_budget, slide.page_index);
    report.slide_keyphrases[slide.page_index] =
        static_cast<int>(keyphrases.size());
    std::vector<Concept> concepts =
        services.linker.LinkKeyphrases(keyphrases, config, &log);
    FetchAbstracts(concepts, services.abstracts, log);
    const std::vector<double> w_lm =
        WeighAbstracts(concepts, material.full_text, embedder);
    const std::vector<double> w_slide =
        WeighAbstracts(concepts, slide.text, embedder);
    for (size_t i = 0; i < concepts.size(); ++i) {
      concepts[i].SetMaterialWeight(w_lm[i]);
      concepts[i].SetSlideWeight(slide.page_index, w_slide[i]);
    }
    return concepts;
  };

  // Analyses running ahead of the commit cursor in parallel mode.
  const size_t ahead =
      static_cast<size_t>(std::max(1, options.parallel_slides));
  std::vector<std::future<std::vector<Concept>>> pending(
      material.slides.size());
  size_t launched = 0;
  for (size_t i = 0; i < material.slides.size(); ++i) {
    const Slide& slide = material.slides[i];
    if (ahead > 1) {
      while (launched < material.slides.size() && launched < i + ahead) {
        pending[launched] = std::async(std::launch::async, analyze,
                                       std::cref(material.slides[launched]));
        ++launched;
      }
    }
    ProcessSlideWithRetry(slide, services, material.id, log, report, [&]() {
      if (pending[i].valid()) return pending[i].get();
      return analyze(slide);
    });
    log.Event(SlideEvent("commit", slide.page_index));
    if (options.on_slide_committed) {
      options.on_slide_committed(slide.page_index,
                                 *services.store.Snapshot(material.id));
    }
  }
  report.main_concepts = static_cast<int>(
      ConceptsOf(*services.store.Snapshot(material.id), material.id).size());

  if (options.expand) {
    RunExpansion(material, services, config, embedder, log, report);
  }
  return Finish(material, services, log, std::move(report));
}

PipelineResult RunPipeline(const LearningMaterial& material,
                           PipelineServices services,
                           const PipelineConfig& config,
                           const RunOptions& options) {
  return config.mode == PipelineMode::kTopDown
             ? RunTopDown(material, services, config, options)
             : RunBottomUp(material, services, config, options);
}

}  // namespace edukg
