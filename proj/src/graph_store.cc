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

#include "edukg/graph_store.h"

#include <filesystem>
#include <fstream>

#include "edukg/error.h"

namespace edukg {

GraphStore::GraphStore(std::string journal_dir)
    : journal_dir_(std::move(journal_dir)) {
  if (!journal_dir_.empty()) std::filesystem::create_directories(journal_dir_);
}

GraphStore::Entry& GraphStore::Find(const std::string& material_id) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(material_id);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kUnknownMaterial, "unknown material " + material_id);
  }
  return *it->second;
}

void GraphStore::Journal(const std::string& name, const EduKG& graph) const {
  if (journal_dir_.empty()) return;
  const std::filesystem::path target =
      std::filesystem::path(journal_dir_) / (name + ".json");
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << SerializeGraph(graph);
  }
  std::filesystem::rename(tmp, target);
}

uint64_t GraphStore::RegisterMaterial(const LearningMaterial& material) {
  Entry* entry = nullptr;
  {
    std::unique_lock lock(mu_);
    auto& slot = entries_[material.id];
    if (!slot) slot = std::make_unique<Entry>();
    entry = slot.get();
  }
  std::lock_guard writer(entry->writer);
  auto graph = std::make_shared<EduKG>();
  AddMaterialNode(*graph, material.id, material.title);
  entry->num_slides = material.num_slides();
  {
    std::unique_lock lock(mu_);
    entry->working = graph;
    ++entry->revision;
  }
  Journal(material.id + ".working", *graph);
  return entry->revision;
}

bool GraphStore::HasMaterial(const std::string& material_id) const {
  std::shared_lock lock(mu_);
  return entries_.contains(material_id);
}

uint64_t GraphStore::Commit(const std::string& material_id,
                            const std::function<void(EduKG&)>& mutate) {
  Entry& entry = Find(material_id);
  std::lock_guard writer(entry.writer);
  std::shared_ptr<const EduKG> current;
  {
    std::shared_lock lock(mu_);
    current = entry.working;
  }
  auto next = std::make_shared<EduKG>(*current);
  mutate(*next);
  if (*next == *current) {
    std::shared_lock lock(mu_);
    return entry.revision;
  }
  const auto problems = CheckGraph(*next);
  if (!problems.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "commit rejected: " + problems.front());
  }
  uint64_t revision = 0;
  {
    std::unique_lock lock(mu_);
    entry.working = next;
    revision = ++entry.revision;
  }
  Journal(material_id + ".working", *next);
  return revision;
}

uint64_t GraphStore::UpsertMaterialConcepts(const std::string& material_id,
                                            std::span<const Concept> concepts) {
  return Commit(material_id, [&](EduKG& graph) {
    AddMaterialConcepts(graph, material_id, concepts);
  });
}

uint64_t GraphStore::UpsertSlideSubgraph(const std::string& material_id,
                                         int page_index,
                                         std::span<const Concept> concepts) {
  Entry& entry = Find(material_id);
  if (page_index < 0 || page_index >= entry.num_slides) {
    throw Error(ErrorCode::kUnknownSlide, "material " + material_id +
                                              " has no slide " +
                                              std::to_string(page_index));
  }
  return Commit(material_id, [&](EduKG& graph) {
    AddSlideConcepts(graph, material_id, page_index, concepts);
  });
}

std::shared_ptr<const EduKG> GraphStore::Snapshot(
    const std::string& material_id) const {
  Entry& entry = Find(material_id);
  std::shared_lock lock(mu_);
  return entry.working;
}

uint64_t GraphStore::Revision(const std::string& material_id) const {
  Entry& entry = Find(material_id);
  std::shared_lock lock(mu_);
  return entry.revision;
}

void GraphStore::Publish(const std::string& material_id, EduKG graph) {
  Entry* entry = nullptr;
  {
    std::unique_lock lock(mu_);
    auto& slot = entries_[material_id];
    if (!slot) {
      slot = std::make_unique<Entry>();
      auto working = std::make_shared<EduKG>();
      AddMaterialNode(*working, material_id, material_id);
      slot->working = std::move(working);
    }
    entry = slot.get();
  }
  const auto problems = CheckGraph(graph);
  if (!problems.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "publish rejected: " + problems.front());
  }
  graph.status = GraphStatus::kPublished;
  auto published = std::make_shared<const EduKG>(std::move(graph));
  {
    std::lock_guard writer(entry->writer);
    std::unique_lock lock(mu_);
    entry->published = published;
  }
  Journal(material_id + ".published", *published);
}

bool GraphStore::IsPublished(const std::string& material_id) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(material_id);
  return it != entries_.end() && it->second->published != nullptr;
}

std::shared_ptr<const EduKG> GraphStore::Published(
    const std::string& material_id) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(material_id);
  if (it == entries_.end() || it->second->published == nullptr) {
    throw Error(ErrorCode::kUnpublishedMaterial,
                "material " + material_id + " has no published graph");
  }
  return it->second->published;
}

std::vector<Concept> GraphStore::SlideEduKG(const std::string& material_id,
                                            int page_index, int k,
                                            Slot slot) const {
  auto graph =
      slot == Slot::kWorking ? Snapshot(material_id) : Published(material_id);
  return TopSlideConcepts(*graph, material_id, page_index, k);
}

EduKG GraphStore::AggregateCourse(
    std::span<const std::string> material_ids) const {
  std::vector<std::shared_ptr<const EduKG>> graphs;
  for (const std::string& id : material_ids) graphs.push_back(Published(id));
  std::vector<const EduKG*> raw;
  for (const auto& g : graphs) raw.push_back(g.get());
  return MergeGraphs(raw);
}

}  // namespace edukg
