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

// Draft lifecycle for moderator review. A draft runs the selected pipeline
// without expansion in a background worker; once Ready its main concepts can
// be removed or added under optimistic version control, and finalize expands
// the edited set and publishes the result to the shared graph store.

#ifndef EDUKG_HITL_H_
#define EDUKG_HITL_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "edukg/core_model.h"
#include "edukg/graph.h"
#include "edukg/layout.h"
#include "edukg/pipelines.h"

namespace edukg {

enum class DraftState { kBuilding, kReady, kPublished, kFailed };

std::string_view DraftStateName(DraftState state);

struct DraftView {
  std::string id;
  std::string material_id;
  PipelineMode mode = PipelineMode::kBottomUp;
  DraftState state = DraftState::kBuilding;
  uint64_t version = 0;
  size_t concept_count = 0;
  std::string error;
  std::vector<std::string> warnings;
};

class HitlService {
 public:
  // `services.store` receives published graphs; drafts build in private
  // stores.
  HitlService(PipelineServices services, PipelineConfig config);
  ~HitlService();

  HitlService(const HitlService&) = delete;
  HitlService& operator=(const HitlService&) = delete;

  // Registers (or replaces) a material. An empty id gets a generated one.
  std::string IngestMaterial(LearningMaterial material);
  std::string IngestGlyphs(const GlyphDocument& document, std::string title,
                           std::string id);
  // Throws Error(kUnknownMaterial).
  LearningMaterial Material(const std::string& material_id) const;

  // Starts the pipeline in the background and returns the draft id. Throws
  // Error(kUnknownMaterial), Error(kConflictActiveDraft) while another draft
  // of the material is Building or Ready, and Error(kPipelineFailed) for a
  // material without slides.
  std::string CreateDraft(const std::string& material_id, PipelineMode mode);

  // Throws Error(kUnknownDraft).
  DraftView GetDraft(const std::string& draft_id) const;
  // Blocks until the draft leaves Building or the timeout passes.
  DraftView WaitForDraft(const std::string& draft_id,
                         std::chrono::milliseconds timeout) const;

  // Sorted by w_LM descending, then uri. Throws Error(kNotReady) while
  // Building and Error(kPipelineFailed) for a failed draft.
  std::vector<Concept> ListConcepts(const std::string& draft_id) const;

  // Mutations return the new version. Throw Error(kDraftImmutable) after
  // publication, Error(kNotReady) while Building and Error(kVersionConflict)
  // for a stale expected version.
  uint64_t RemoveConcept(const std::string& draft_id, const std::string& uri,
                         uint64_t expected_version);
  // `query` is a resource uri (http/https) or free text resolved through the
  // linker. Throws Error(kBadSlideIndex) and Error(kUnresolvable).
  uint64_t AddConcept(const std::string& draft_id, const std::string& query,
                      const std::vector<int>& slides,
                      uint64_t expected_version);
  std::shared_ptr<const EduKG> Finalize(const std::string& draft_id,
                                        uint64_t expected_version);

  // Graph of the current concept set without expansion.
  EduKG DraftGraph(const std::string& draft_id) const;

  GraphStore& store() { return services_.store; }
  const PipelineConfig& config() const { return config_; }

 private:
  struct Draft {
    std::string id;
    std::string material_id;
    PipelineMode mode = PipelineMode::kBottomUp;
    mutable std::mutex mu;
    mutable std::condition_variable settled;
    DraftState state = DraftState::kBuilding;
    uint64_t version = 0;
    std::map<std::string, Concept> concepts;
    std::string error;
    std::vector<std::string> warnings;
    std::jthread worker;
  };

  Draft& FindDraft(const std::string& draft_id) const;
  void Build(Draft& draft, LearningMaterial material);
  // Caller holds draft.mu.
  static void RequireEditable(const Draft& draft, uint64_t expected_version);
  static DraftView ViewOf(const Draft& draft);
  static EduKG GraphOf(const LearningMaterial& material,
                       const std::map<std::string, Concept>& concepts);
  std::string Resolve(const std::string& query);

  PipelineServices services_;
  PipelineConfig config_;
  mutable std::shared_mutex mu_;
  std::map<std::string, LearningMaterial> materials_;
  uint64_t next_material_ = 1;
  uint64_t next_draft_ = 1;
  // Declared last so workers are joined before the members they use go away.
  std::map<std::string, std::unique_ptr<Draft>> drafts_;
};

}  // namespace edukg

#endif  // EDUKG_HITL_H_
