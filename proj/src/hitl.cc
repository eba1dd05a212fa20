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

#include "edukg/hitl.h"

#include <algorithm>
#include <utility>

#include "edukg/error.h"
#include "edukg/graph_store.h"
#include "edukg/weighting.h"

namespace edukg {
namespace {

bool IsUri(std::string_view query) {
  return query.starts_with("http://") || query.starts_with("https://");
}

bool IsActive(DraftState state) {
  return state == DraftState::kBuilding || state == DraftState::kReady;
}

}  // namespace

std::string_view DraftStateName(DraftState state) {
  switch (state) {
    case DraftState::kBuilding:
      return "Building";
    case DraftState::kReady:
      return "Ready";
    case DraftState::kPublished:
      return "Published";
    case DraftState::kFailed:
      return "Failed";
  }
  return "Unknown";
}

HitlService::HitlService(PipelineServices services, PipelineConfig config)
    : services_(services), config_(std::move(config)) {
  config_.Validate();
}

HitlService::~HitlService() {
  std::vector<Draft*> drafts;
  {
    std::shared_lock lock(mu_);
    for (auto& [id, draft] : drafts_) drafts.push_back(draft.get());
  }
  for (Draft* draft : drafts) {
    if (draft->worker.joinable()) draft->worker.join();
  }
}

std::string HitlService::IngestMaterial(LearningMaterial material) {
  std::unique_lock lock(mu_);
  if (material.id.empty()) {
    do {
      material.id = "m" + std::to_string(next_material_++);
    } while (materials_.contains(material.id));
  }
  const std::string id = material.id;
  materials_.insert_or_assign(id, std::move(material));
  return id;
}

std::string HitlService::IngestGlyphs(const GlyphDocument& document,
                                      std::string title, std::string id) {
  LearningMaterial material = ExtractSlides(document, {}, title, id);
  if (id.empty()) material.id.clear();
  return IngestMaterial(std::move(material));
}

LearningMaterial HitlService::Material(const std::string& material_id) const {
  std::shared_lock lock(mu_);
  auto it = materials_.find(material_id);
  if (it == materials_.end()) {
    throw Error(ErrorCode::kUnknownMaterial, "unknown material " + material_id);
  }
  return it->second;
}

std::string HitlService::CreateDraft(const std::string& material_id,
                                     PipelineMode mode) {
  std::unique_lock lock(mu_);
  auto material = materials_.find(material_id);
  if (material == materials_.end()) {
    throw Error(ErrorCode::kUnknownMaterial, "unknown material " + material_id);
  }
  if (material->second.slides.empty()) {
    throw Error(ErrorCode::kPipelineFailed,
                "EmptyMaterial: material " + material_id + " has no slides");
  }
  for (const auto& [id, draft] : drafts_) {
    if (draft->material_id != material_id) continue;
    std::lock_guard draft_lock(draft->mu);
    if (IsActive(draft->state)) {
      throw Error(
          ErrorCode::kConflictActiveDraft,
          "material " + material_id + " already has active draft " + id);
    }
  }
  auto draft = std::make_unique<Draft>();
  draft->id = "d" + std::to_string(next_draft_++);
  draft->material_id = material_id;
  draft->mode = mode;
  Draft& ref = *draft;
  const std::string id = draft->id;
  drafts_.emplace(id, std::move(draft));
  ref.worker = std::jthread(
      [this, &ref, copy = material->second]() mutable { Build(ref, copy); });
  return id;
}

void HitlService::Build(Draft& draft, LearningMaterial material) {
  GraphStore scratch;
  PipelineServices services = services_;
  PipelineServices draft_services{services.ranker,      services.linker,
                                  services.abstracts,   services.embedder,
                                  services.linked_data, scratch};
  PipelineConfig config = config_;
  config.mode = draft.mode;
  RunLog log;
  RunOptions options;
  options.expand = false;
  options.log = &log;
  try {
    PipelineResult result =
        RunPipeline(material, draft_services, config, options);
    std::map<std::string, Concept> concepts;
    for (Concept& c : ConceptsOf(result.graph, material.id)) {
      std::string uri = c.uri;
      concepts.emplace(std::move(uri), std::move(c));
    }
    std::lock_guard lock(draft.mu);
    draft.concepts = std::move(concepts);
    draft.warnings = result.report.warnings;
    draft.state = DraftState::kReady;
    draft.version = 1;
  } catch (const std::exception& e) {
    std::lock_guard lock(draft.mu);
    draft.state = DraftState::kFailed;
    draft.error = e.what();
    draft.warnings = log.warnings();
  }
  draft.settled.notify_all();
}

HitlService::Draft& HitlService::FindDraft(const std::string& draft_id) const {
  std::shared_lock lock(mu_);
  auto it = drafts_.find(draft_id);
  if (it == drafts_.end()) {
    throw Error(ErrorCode::kUnknownDraft, "unknown draft " + draft_id);
  }
  return *it->second;
}

DraftView HitlService::ViewOf(const Draft& draft) {
  DraftView view;
  view.id = draft.id;
  view.material_id = draft.material_id;
  view.mode = draft.mode;
  view.state = draft.state;
  view.version = draft.version;
  view.concept_count = draft.concepts.size();
  view.error = draft.error;
  view.warnings = draft.warnings;
  return view;
}

DraftView HitlService::GetDraft(const std::string& draft_id) const {
  const Draft& draft = FindDraft(draft_id);
  std::lock_guard lock(draft.mu);
  return ViewOf(draft);
}

DraftView HitlService::WaitForDraft(const std::string& draft_id,
                                    std::chrono::milliseconds timeout) const {
  const Draft& draft = FindDraft(draft_id);
  std::unique_lock lock(draft.mu);
  draft.settled.wait_for(lock, timeout,
                         [&] { return draft.state != DraftState::kBuilding; });
  return ViewOf(draft);
}

std::vector<Concept> HitlService::ListConcepts(
    const std::string& draft_id) const {
  const Draft& draft = FindDraft(draft_id);
  std::lock_guard lock(draft.mu);
  if (draft.state == DraftState::kBuilding) {
    throw Error(ErrorCode::kNotReady, "draft " + draft_id + " is building");
  }
  if (draft.state == DraftState::kFailed) {
    throw Error(ErrorCode::kPipelineFailed, draft.error);
  }
  std::vector<Concept> concepts;
  concepts.reserve(draft.concepts.size());
  for (const auto& [uri, c] : draft.concepts) concepts.push_back(c);
  std::stable_sort(concepts.begin(), concepts.end(),
                   [](const Concept& a, const Concept& b) {
                     if (a.w_lm != b.w_lm) return a.w_lm > b.w_lm;
                     return a.uri < b.uri;
                   });
  return concepts;
}

void HitlService::RequireEditable(const Draft& draft,
                                  uint64_t expected_version) {
  switch (draft.state) {
    case DraftState::kBuilding:
      throw Error(ErrorCode::kNotReady, "draft " + draft.id + " is building");
    case DraftState::kPublished:
      throw Error(ErrorCode::kDraftImmutable,
                  "draft " + draft.id + " is published");
    case DraftState::kFailed:
      throw Error(ErrorCode::kPipelineFailed, draft.error);
    case DraftState::kReady:
      break;
  }
  if (draft.version != expected_version) {
    throw Error(ErrorCode::kVersionConflict,
                "draft " + draft.id + " is at version " +
                    std::to_string(draft.version) + ", not " +
                    std::to_string(expected_version));
  }
}

uint64_t HitlService::RemoveConcept(const std::string& draft_id,
                                    const std::string& uri,
                                    uint64_t expected_version) {
  Draft& draft = FindDraft(draft_id);
  std::lock_guard lock(draft.mu);
  RequireEditable(draft, expected_version);
  if (draft.concepts.erase(uri) == 0) {
    throw Error(ErrorCode::kUnknownConcept,
                uri + " is not in draft " + draft_id);
  }
  return ++draft.version;
}

std::string HitlService::Resolve(const std::string& query) {
  const std::string_view trimmed = Trim(query);
  if (trimmed.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty concept query");
  }
  if (IsUri(trimmed)) return std::string(trimmed);
  const std::vector<AnnotationHit> hits = services_.linker.Annotate(
      trimmed, config_.linker_confidence, config_.linker_support);
  const AnnotationHit* best = nullptr;
  for (const AnnotationHit& hit : hits) {
    if (best == nullptr || hit.similarity_score > best->similarity_score) {
      best = &hit;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kUnresolvable,
                "no resource found for '" + std::string(trimmed) + "'");
  }
  return best->uri;
}

uint64_t HitlService::AddConcept(const std::string& draft_id,
                                 const std::string& query,
                                 const std::vector<int>& slides,
                                 uint64_t expected_version) {
  Draft& draft = FindDraft(draft_id);
  const LearningMaterial material = Material(draft.material_id);
  std::lock_guard lock(draft.mu);
  RequireEditable(draft, expected_version);
  for (int index : slides) {
    if (index < 0 || index >= material.num_slides()) {
      throw Error(ErrorCode::kBadSlideIndex,
                  "slide " + std::to_string(index) + " outside [0, " +
                      std::to_string(material.num_slides()) + ")");
    }
  }
  const std::string uri = Resolve(query);

  Concept added;
  added.uri = uri;
  added.label = LabelFromUri(uri);
  try {
    added.abstract = services_.abstracts.FetchAbstract(uri);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kServiceUnavailable &&
        e.code() != ErrorCode::kMalformedResponse) {
      throw;
    }
    draft.warnings.push_back("abstract of " + uri +
                             " unavailable: " + e.what());
  }
  added.SetMaterialWeight(WeightConceptLm(added, material, services_.embedder));
  for (int index : slides) {
    added.SetSlideWeight(
        index,
        WeightConceptSlide(added, material.slides[index], services_.embedder));
  }
  auto existing = draft.concepts.find(uri);
  if (existing == draft.concepts.end()) {
    draft.concepts.emplace(uri, std::move(added));
  } else {
    for (const auto& [index, w_slide] : added.slide_weights) {
      existing->second.SetSlideWeight(index, w_slide);
    }
  }
  return ++draft.version;
}

EduKG HitlService::GraphOf(const LearningMaterial& material,
                           const std::map<std::string, Concept>& concepts) {
  GraphStore scratch;
  scratch.RegisterMaterial(material);
  std::vector<Concept> all;
  for (const auto& [uri, c] : concepts) all.push_back(c);
  scratch.UpsertMaterialConcepts(material.id, all);
  for (const Slide& slide : material.slides) {
    std::vector<Concept> linked;
    for (const Concept& c : all) {
      if (c.slide_weights.contains(slide.page_index)) linked.push_back(c);
    }
    scratch.UpsertSlideSubgraph(material.id, slide.page_index, linked);
  }
  return *scratch.Snapshot(material.id);
}

EduKG HitlService::DraftGraph(const std::string& draft_id) const {
  const Draft& draft = FindDraft(draft_id);
  const LearningMaterial material = Material(draft.material_id);
  std::lock_guard lock(draft.mu);
  if (draft.state == DraftState::kBuilding) {
    throw Error(ErrorCode::kNotReady, "draft " + draft_id + " is building");
  }
  return GraphOf(material, draft.concepts);
}

std::shared_ptr<const EduKG> HitlService::Finalize(const std::string& draft_id,
                                                   uint64_t expected_version) {
  Draft& draft = FindDraft(draft_id);
  const LearningMaterial material = Material(draft.material_id);
  std::lock_guard lock(draft.mu);
  RequireEditable(draft, expected_version);
  const EduKG reviewed = GraphOf(material, draft.concepts);
  RunLog log;
  EduKG expanded =
      ExpandGraph(reviewed, material, config_,
                  ExpansionServices{services_.linked_data, services_.abstracts,
                                    services_.embedder},
                  &log);
  for (const std::string& warning : log.warnings()) {
    draft.warnings.push_back(warning);
  }
  services_.store.Publish(material.id, std::move(expanded));
  draft.state = DraftState::kPublished;
  ++draft.version;
  return services_.store.Published(material.id);
}

}  // namespace edukg
