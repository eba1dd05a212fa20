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

#ifndef EDUKG_GRAPH_STORE_H_
#define EDUKG_GRAPH_STORE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "edukg/core_model.h"
#include "edukg/graph.h"

namespace edukg {

// In-memory store of per-material graphs.
//
// Each material has a working graph, written by pipeline runs, and optionally
// a published graph served to learners. Writers copy the current working
// snapshot, mutate the copy and swap it in as a new revision, so readers only
// ever see whole revisions. When a journal directory is configured every
// revision is also written there as a portable graph document.
class GraphStore {
 public:
  explicit GraphStore(std::string journal_dir = "");

  // Creates (or resets) the working graph of a material with its material
  // node. Returns the new revision.
  uint64_t RegisterMaterial(const LearningMaterial& material);
  bool HasMaterial(const std::string& material_id) const;

  // Applies `mutate` to a copy of the working graph and publishes the copy as
  // the next revision. A mutation that leaves the graph unchanged does not
  // create a revision. Invariant violations throw and discard the copy.
  uint64_t Commit(const std::string& material_id,
                  const std::function<void(EduKG&)>& mutate);

  uint64_t UpsertMaterialConcepts(const std::string& material_id,
                                  std::span<const Concept> concepts);
  // Throws Error(kUnknownMaterial) / Error(kUnknownSlide).
  uint64_t UpsertSlideSubgraph(const std::string& material_id, int page_index,
                               std::span<const Concept> concepts);

  std::shared_ptr<const EduKG> Snapshot(const std::string& material_id) const;
  uint64_t Revision(const std::string& material_id) const;

  void Publish(const std::string& material_id, EduKG graph);
  bool IsPublished(const std::string& material_id) const;
  // Throws Error(kUnpublishedMaterial).
  std::shared_ptr<const EduKG> Published(const std::string& material_id) const;

  enum class Slot { kWorking, kPublished };
  std::vector<Concept> SlideEduKG(const std::string& material_id,
                                  int page_index, int k,
                                  Slot slot = Slot::kWorking) const;

  // Union of the published graphs of the given materials.
  EduKG AggregateCourse(std::span<const std::string> material_ids) const;

 private:
  struct Entry {
    std::shared_ptr<const EduKG> working;
    std::shared_ptr<const EduKG> published;
    uint64_t revision = 0;
    int num_slides = 0;
    std::mutex writer;
  };

  Entry& Find(const std::string& material_id) const;
  void Journal(const std::string& name, const EduKG& graph) const;

  std::string journal_dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<Entry>> entries_;
};

}  // namespace edukg

#endif  // EDUKG_GRAPH_STORE_H_
