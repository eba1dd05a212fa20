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

// Educational knowledge graph: typed nodes and typed, weighted edges.
//
//   Material --HAS_SLIDE--> Slide
//   Material --CONTAINS(w_LM)--> Concept
//   Slide    --CONTAINS(w_Slide)--> Concept
//   Concept  --RELATED_TO(w)--> RelatedConcept | Concept
//   Concept  --BELONGS_TO(w)--> Category
//
// A concept's importance on a slide is derived from its two CONTAINS edges:
// the slide edge weight plus the material edge weight.

#ifndef EDUKG_GRAPH_H_
#define EDUKG_GRAPH_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "edukg/core_model.h"

namespace edukg {

enum class NodeKind { kMaterial, kSlide, kConcept, kRelatedConcept, kCategory };
enum class EdgeKind { kHasSlide, kContains, kRelatedTo, kBelongsTo };
enum class GraphStatus { kDraft, kPublished };

std::string_view NodeKindName(NodeKind kind);
std::string_view EdgeKindName(EdgeKind kind);
std::string_view GraphStatusName(GraphStatus status);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kConcept;
  std::string label;
  std::map<std::string, std::string> properties;

  bool operator==(const Node&) const = default;
};

struct Edge {
  std::string src;
  std::string dst;
  EdgeKind kind = EdgeKind::kContains;
  // Unset for HAS_SLIDE.
  std::optional<double> weight;

  bool operator==(const Edge&) const = default;
};

struct EdgeKey {
  std::string src;
  EdgeKind kind;
  std::string dst;

  auto operator<=>(const EdgeKey&) const = default;
};

class EduKG {
 public:
  GraphStatus status = GraphStatus::kDraft;

  // Returns false and leaves the graph unchanged when the id already exists.
  bool AddNode(Node node);
  // Returns false when an edge with the same (src, kind, dst) exists. Throws
  // Error(kInvalidArgument) when an endpoint is missing.
  bool AddEdge(Edge edge);
  bool RemoveNode(const std::string& id);  // also drops incident edges

  const Node* FindNode(const std::string& id) const;
  const Edge* FindEdge(const std::string& src, EdgeKind kind,
                       const std::string& dst) const;
  std::vector<const Edge*> OutEdges(const std::string& src,
                                    EdgeKind kind) const;
  std::vector<const Edge*> InEdges(const std::string& dst, EdgeKind kind) const;

  const std::map<std::string, Node>& nodes() const { return nodes_; }
  const std::map<EdgeKey, Edge>& edges() const { return edges_; }
  size_t node_count() const { return nodes_.size(); }
  size_t edge_count() const { return edges_.size(); }
  size_t CountNodes(NodeKind kind) const;
  size_t CountEdges(EdgeKind kind) const;

  bool operator==(const EduKG&) const = default;

 private:
  std::map<std::string, Node> nodes_;
  std::map<EdgeKey, Edge> edges_;
};

std::string MaterialNodeId(std::string_view material_id);
std::string SlideNodeId(std::string_view material_id, int page_index);

// Adds the material node (no-op when present).
void AddMaterialNode(EduKG& graph, const std::string& material_id,
                     const std::string& title);
// Concept nodes plus material-level CONTAINS edges weighted with w_lm.
void AddMaterialConcepts(EduKG& graph, const std::string& material_id,
                         std::span<const Concept> concepts);
// Slide node, HAS_SLIDE edge, concept nodes and CONTAINS edges at both slide
// (w_Slide of that page) and material (w_lm) level. Existing material edges
// are kept as they are.
void AddSlideConcepts(EduKG& graph, const std::string& material_id,
                      int page_index, std::span<const Concept> concepts);

// Main concepts of a material with w_lm and per-slide weights rebuilt from
// the CONTAINS edges, ordered by uri.
std::vector<Concept> ConceptsOf(const EduKG& graph,
                                const std::string& material_id);

// Concepts attached to one slide, by importance descending then uri, at most
// k. Throws Error(kUnknownSlide) when the slide node does not exist.
std::vector<Concept> TopSlideConcepts(const EduKG& graph,
                                      const std::string& material_id,
                                      int page_index, int k);

// Union of graphs; nodes merge by id and edges by (src, kind, dst).
EduKG MergeGraphs(std::span<const EduKG* const> graphs);

// Structural checks: edge endpoints exist, CONTAINS from a slide implies
// CONTAINS from its material, weights finite and within [-1, 1]. Returns the
// list of violations (empty when valid).
std::vector<std::string> CheckGraph(const EduKG& graph);

// Portable graph document (JSON):
// {"status":..., "nodes":[{"id","kind","label","properties"}],
//  "edges":[{"src","dst","kind","weight"}]}
std::string SerializeGraph(const EduKG& graph);
// Throws Error(kInvalidArgument) for malformed documents.
EduKG ParseGraph(std::string_view document);

// One idempotent Cypher MERGE statement per node and per edge, one per line.
std::string ExportCypher(const EduKG& graph);

}  // namespace edukg

#endif  // EDUKG_GRAPH_H_
