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

// Top-down and bottom-up knowledge-graph construction.
//
// Top-down extracts keyphrases from the whole material (budget: factor x
// slides), links and weighs them as the material's main concepts, then walks
// the slides and attaches a slide concept only when the material already
// holds it; anything else is discarded.
//
// Bottom-up walks the slides in page order. Each slide's concepts are
// weighted against the material (w_LM) and the slide (w_Slide), attached to
// both the slide and the material, and committed before the next slide
// starts, so slide graphs become readable while construction continues.
//
// Both run concept expansion exactly once, after the last slide.

#ifndef EDUKG_PIPELINES_H_
#define EDUKG_PIPELINES_H_

#include <functional>
#include <string>
#include <vector>

#include "edukg/core_model.h"
#include "edukg/embedding.h"
#include "edukg/expansion.h"
#include "edukg/graph.h"
#include "edukg/graph_store.h"
#include "edukg/keyphrase.h"
#include "edukg/linker.h"
#include "edukg/run_log.h"
#include "edukg/weighting.h"

namespace edukg {

struct PipelineServices {
  KeyphraseRanker& ranker;
  EntityLinker& linker;
  AbstractSource& abstracts;
  EmbeddingProvider& embedder;
  LinkedDataClient& linked_data;
  GraphStore& store;
};

using SlideCommitted =
    std::function<void(int page_index, const EduKG& snapshot)>;

struct RunOptions {
  bool expand = true;
  // Bottom-up only: fired after a slide's subgraph is committed and before
  // the next slide is processed.
  SlideCommitted on_slide_committed;
  // Bottom-up only: number of slides analyzed concurrently. Commits and
  // notifications still happen one slide at a time in page order.
  int parallel_slides = 1;
  // Shared log; a private one is used when null.
  RunLog* log = nullptr;
};

struct RunReport {
  PipelineMode mode = PipelineMode::kBottomUp;
  int num_slides = 0;
  int material_keyphrase_budget = 0;
  int material_keyphrases = 0;
  int slide_keyphrase_budget = 0;
  std::vector<int> slide_keyphrases;
  int main_concepts = 0;
  int discarded_slide_concepts = 0;
  int skipped_slides = 0;
  int expansion_runs = 0;
  ExpansionStats expansion;
  size_t nodes = 0;
  size_t edges = 0;
  std::vector<std::string> warnings;
  // Ordered stage events: "rank:material", "rank:slide:N", "commit:slide:N",
  // "expansion".
  std::vector<std::string> events;

  std::string ToJson() const;
};

struct PipelineResult {
  EduKG graph;
  RunReport report;
};

// Throw Error(kEmptyMaterial) for a material without slides.
PipelineResult RunTopDown(const LearningMaterial& material,
                          PipelineServices services,
                          const PipelineConfig& config,
                          const RunOptions& options = {});
PipelineResult RunBottomUp(const LearningMaterial& material,
                           PipelineServices services,
                           const PipelineConfig& config,
                           const RunOptions& options = {});
// Dispatches on config.mode.
PipelineResult RunPipeline(const LearningMaterial& material,
                           PipelineServices services,
                           const PipelineConfig& config,
                           const RunOptions& options = {});

}  // namespace edukg

#endif  // EDUKG_PIPELINES_H_
