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

#include "edukg/graph.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "edukg/error.h"
#include "json.hpp"

namespace edukg {
namespace {

using nlohmann::json;

constexpr NodeKind kNodeKinds[] = {
    NodeKind::kMaterial, NodeKind::kSlide, NodeKind::kConcept,
    NodeKind::kRelatedConcept, NodeKind::kCategory};
constexpr EdgeKind kEdgeKinds[] = {EdgeKind::kHasSlide, EdgeKind::kContains,
                                   EdgeKind::kRelatedTo, EdgeKind::kBelongsTo};

NodeKind ParseNodeKind(std::string_view name) {
  for (NodeKind kind : kNodeKinds) {
    if (NodeKindName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown node kind '" + std::string(name) + "'");
}

EdgeKind ParseEdgeKind(std::string_view name) {
  for (EdgeKind kind : kEdgeKinds) {
    if (EdgeKindName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown edge kind '" + std::string(name) + "'");
}

std::string CypherString(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '"':
        out += "\\\"";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  out += '"';
  return out;
}

std::string FormatWeight(double weight) { return json(weight).dump(); }

// Page index of a slide node that belongs to `material_id`, if any.
std::optional<int> SlidePage(const EduKG& graph, const std::string& node_id,
                             const std::string& material_id) {
  const Node* node = graph.FindNode(node_id);
  if (node == nullptr || node->kind != NodeKind::kSlide) return std::nullopt;
  auto material = node->properties.find("material_id");
  auto page = node->properties.find("page_index");
  if (material == node->properties.end() || page == node->properties.end() ||
      material->second != material_id) {
    return std::nullopt;
  }
  return std::stoi(page->second);
}

}  // namespace

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kMaterial:
      return "Material";
    case NodeKind::kSlide:
      return "Slide";
    case NodeKind::kConcept:
      return "Concept";
    case NodeKind::kRelatedConcept:
      return "RelatedConcept";
    case NodeKind::kCategory:
      return "Category";
  }
  return "Concept";
}

std::string_view EdgeKindName(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kHasSlide:
      return "HAS_SLIDE";
    case EdgeKind::kContains:
      return "CONTAINS";
    case EdgeKind::kRelatedTo:
      return "RELATED_TO";
    case EdgeKind::kBelongsTo:
      return "BELONGS_TO";
  }
  return "CONTAINS";
}

std::string_view GraphStatusName(GraphStatus status) {
  return status == GraphStatus::kPublished ? "Published" : "Draft";
}

bool EduKG::AddNode(Node node) {
  auto id = node.id;
  return nodes_.emplace(std::move(id), std::move(node)).second;
}

bool EduKG::AddEdge(Edge edge) {
  if (!nodes_.contains(edge.src) || !nodes_.contains(edge.dst)) {
    throw Error(
        ErrorCode::kInvalidArgument,
        "edge " + edge.src + " -> " + edge.dst + " references a missing node");
  }
  EdgeKey key{edge.src, edge.kind, edge.dst};
  return edges_.emplace(std::move(key), std::move(edge)).second;
}

bool EduKG::RemoveNode(const std::string& id) {
  if (nodes_.erase(id) == 0) return false;
  std::erase_if(edges_, [&](const auto& entry) {
    return entry.first.src == id || entry.first.dst == id;
  });
  return true;
}

const Node* EduKG::FindNode(const std::string& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Edge* EduKG::FindEdge(const std::string& src, EdgeKind kind,
                            const std::string& dst) const {
  auto it = edges_.find(EdgeKey{src, kind, dst});
  return it == edges_.end() ? nullptr : &it->second;
}

std::vector<const Edge*> EduKG::OutEdges(const std::string& src,
                                         EdgeKind kind) const {
  std::vector<const Edge*> out;
  for (auto it = edges_.lower_bound(EdgeKey{src, kind, ""});
       it != edges_.end() && it->first.src == src && it->first.kind == kind;
       ++it) {
    out.push_back(&it->second);
  }
  return out;
}

std::vector<const Edge*> EduKG::InEdges(const std::string& dst,
                                        EdgeKind kind) const {
  std::vector<const Edge*> out;
  for (const auto& [key, edge] : edges_) {
    if (key.dst == dst && key.kind == kind) out.push_back(&edge);
  }
  return out;
}

size_t EduKG::CountNodes(NodeKind kind) const {
  return static_cast<size_t>(std::count_if(
      nodes_.begin(), nodes_.end(),
      [&](const auto& entry) { return entry.second.kind == kind; }));
}

size_t EduKG::CountEdges(EdgeKind kind) const {
  return static_cast<size_t>(std::count_if(
      edges_.begin(), edges_.end(),
      [&](const auto& entry) { return entry.first.kind == kind; }));
}

std::string MaterialNodeId(std::string_view material_id) {
  return "material:" + std::string(material_id);
}

std::string SlideNodeId(std::string_view material_id, int page_index) {
  return "slide:" + std::string(material_id) + ":" + std::to_string(page_index);
}

void AddMaterialNode(EduKG& graph, const std::string& material_id,
                     const std::string& title) {
  graph.AddNode(Node{MaterialNodeId(material_id),
                     NodeKind::kMaterial,
                     title,
                     {{"material_id", material_id}}});
}

namespace {

void AddConceptNode(EduKG& graph, const Concept& c) {
  graph.AddNode(Node{c.uri,
                     NodeKind::kConcept,
                     c.label.empty() ? LabelFromUri(c.uri) : c.label,
                     {{"uri", c.uri}}});
}

}  // namespace

void AddMaterialConcepts(EduKG& graph, const std::string& material_id,
                         std::span<const Concept> concepts) {
  const std::string material_node = MaterialNodeId(material_id);
  if (graph.FindNode(material_node) == nullptr) {
    throw Error(ErrorCode::kUnknownMaterial, "unknown material " + material_id);
  }
  for (const Concept& c : concepts) {
    AddConceptNode(graph, c);
    graph.AddEdge(Edge{material_node, c.uri, EdgeKind::kContains, c.w_lm});
  }
}

void AddSlideConcepts(EduKG& graph, const std::string& material_id,
                      int page_index, std::span<const Concept> concepts) {
  const std::string material_node = MaterialNodeId(material_id);
  if (graph.FindNode(material_node) == nullptr) {
    throw Error(ErrorCode::kUnknownMaterial, "unknown material " + material_id);
  }
  const std::string slide_node = SlideNodeId(material_id, page_index);
  graph.AddNode(Node{slide_node,
                     NodeKind::kSlide,
                     "Slide " + std::to_string(page_index + 1),
                     {{"material_id", material_id},
                      {"page_index", std::to_string(page_index)}}});
  graph.AddEdge(
      Edge{material_node, slide_node, EdgeKind::kHasSlide, std::nullopt});
  for (const Concept& c : concepts) {
    auto w_slide = c.slide_weights.find(page_index);
    if (w_slide == c.slide_weights.end()) {
      throw Error(
          ErrorCode::kInvalidArgument,
          c.uri + " has no weight for slide " + std::to_string(page_index));
    }
    AddConceptNode(graph, c);
    graph.AddEdge(Edge{material_node, c.uri, EdgeKind::kContains, c.w_lm});
    graph.AddEdge(
        Edge{slide_node, c.uri, EdgeKind::kContains, w_slide->second});
  }
}

std::vector<Concept> ConceptsOf(const EduKG& graph,
                                const std::string& material_id) {
  std::vector<Concept> out;
  const std::string material_node = MaterialNodeId(material_id);
  for (const Edge* edge : graph.OutEdges(material_node, EdgeKind::kContains)) {
    const Node* node = graph.FindNode(edge->dst);
    if (node == nullptr || node->kind != NodeKind::kConcept) continue;
    Concept c;
    c.uri = node->id;
    c.label = node->label;
    c.w_lm = edge->weight.value_or(0.0);
    for (const Edge* in : graph.InEdges(node->id, EdgeKind::kContains)) {
      if (auto page = SlidePage(graph, in->src, material_id)) {
        c.SetSlideWeight(*page, in->weight.value_or(0.0));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Concept> TopSlideConcepts(const EduKG& graph,
                                      const std::string& material_id,
                                      int page_index, int k) {
  const std::string slide_node = SlideNodeId(material_id, page_index);
  if (graph.FindNode(slide_node) == nullptr) {
    throw Error(ErrorCode::kUnknownSlide,
                "slide " + std::to_string(page_index) + " of " + material_id +
                    " does not exist");
  }
  const std::string material_node = MaterialNodeId(material_id);
  std::vector<Concept> out;
  for (const Edge* edge : graph.OutEdges(slide_node, EdgeKind::kContains)) {
    const Node* node = graph.FindNode(edge->dst);
    Concept c;
    c.uri = edge->dst;
    c.label = node != nullptr ? node->label : "";
    const Edge* lm = graph.FindEdge(material_node, EdgeKind::kContains, c.uri);
    c.w_lm = lm != nullptr ? lm->weight.value_or(0.0) : 0.0;
    c.SetSlideWeight(page_index, edge->weight.value_or(0.0));
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [&](const Concept& a, const Concept& b) {
    const double ia = a.importance_per_slide.at(page_index);
    const double ib = b.importance_per_slide.at(page_index);
    if (ia != ib) return ia > ib;
    return a.uri < b.uri;
  });
  if (k >= 0 && out.size() > static_cast<size_t>(k)) out.resize(k);
  return out;
}

EduKG MergeGraphs(std::span<const EduKG* const> graphs) {
  EduKG merged;
  bool all_published = !graphs.empty();
  for (const EduKG* graph : graphs) {
    all_published = all_published && graph->status == GraphStatus::kPublished;
    for (const auto& [id, node] : graph->nodes()) merged.AddNode(node);
  }
  for (const EduKG* graph : graphs) {
    for (const auto& [key, edge] : graph->edges()) merged.AddEdge(edge);
  }
  merged.status = all_published ? GraphStatus::kPublished : GraphStatus::kDraft;
  return merged;
}

std::vector<std::string> CheckGraph(const EduKG& graph) {
  std::vector<std::string> problems;
  for (const auto& [key, edge] : graph.edges()) {
    const std::string name =
        std::string(EdgeKindName(key.kind)) + " " + key.src + " -> " + key.dst;
    if (graph.FindNode(key.src) == nullptr ||
        graph.FindNode(key.dst) == nullptr) {
      problems.push_back(name + ": dangling endpoint");
      continue;
    }
    if (key.kind == EdgeKind::kHasSlide) continue;
    if (!edge.weight || !std::isfinite(*edge.weight) || *edge.weight < -1.0 ||
        *edge.weight > 1.0) {
      problems.push_back(name + ": weight missing or outside [-1, 1]");
    }
    if (key.kind == EdgeKind::kContains) {
      const Node* src = graph.FindNode(key.src);
      if (src->kind != NodeKind::kSlide) continue;
      auto material = src->properties.find("material_id");
      if (material == src->properties.end() ||
          graph.FindEdge(MaterialNodeId(material->second), EdgeKind::kContains,
                         key.dst) == nullptr) {
        problems.push_back(name + ": no material-level CONTAINS edge");
      }
    }
  }
  return problems;
}

std::string SerializeGraph(const EduKG& graph) {
  json nodes = json::array();
  for (const auto& [id, node] : graph.nodes()) {
    nodes.push_back({{"id", node.id},
                     {"kind", NodeKindName(node.kind)},
                     {"label", node.label},
                     {"properties", node.properties}});
  }
  json edges = json::array();
  for (const auto& [key, edge] : graph.edges()) {
    json entry = {{"src", edge.src},
                  {"dst", edge.dst},
                  {"kind", EdgeKindName(edge.kind)}};
    entry["weight"] = edge.weight ? json(*edge.weight) : json(nullptr);
    edges.push_back(std::move(entry));
  }
  json doc = {{"status", GraphStatusName(graph.status)},
              {"nodes", std::move(nodes)},
              {"edges", std::move(edges)}};
  return doc.dump(2) + "\n";
}

EduKG ParseGraph(std::string_view document) {
  json doc = json::parse(document, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "graph document is not JSON");
  }
  EduKG graph;
  try {
    const std::string status = doc.value("status", "Draft");
    graph.status =
        status == "Published" ? GraphStatus::kPublished : GraphStatus::kDraft;
    for (const json& n : doc.at("nodes")) {
      Node node;
      node.id = n.at("id").get<std::string>();
      node.kind = ParseNodeKind(n.at("kind").get<std::string>());
      node.label = n.value("label", "");
      if (n.contains("properties")) {
        node.properties =
            n["properties"].get<std::map<std::string, std::string>>();
      }
      if (!graph.AddNode(std::move(node))) {
        throw Error(ErrorCode::kInvalidArgument,
                    "duplicate node " + n.at("id").get<std::string>());
      }
    }
    for (const json& e : doc.at("edges")) {
      Edge edge;
      edge.src = e.at("src").get<std::string>();
      edge.dst = e.at("dst").get<std::string>();
      edge.kind = ParseEdgeKind(e.at("kind").get<std::string>());
      if (e.contains("weight") && !e["weight"].is_null()) {
        edge.weight = e["weight"].get<double>();
      }
      graph.AddEdge(std::move(edge));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("graph document: ") + e.what());
  }
  return graph;
}

std::string ExportCypher(const EduKG& graph) {
  std::string out;
  for (const auto& [id, node] : graph.nodes()) {
    out += "MERGE (n:" + std::string(NodeKindName(node.kind)) +
           " {id: " + CypherString(node.id) +
           "}) SET n.label = " + CypherString(node.label);
    for (const auto& [key, value] : node.properties) {
      out += ", n." + key + " = " + CypherString(value);
    }
    out += ";\n";
  }
  for (const auto& [key, edge] : graph.edges()) {
    out += "MATCH (a {id: " + CypherString(edge.src) +
           "}), (b {id: " + CypherString(edge.dst) +
           "}) MERGE (a)-[r:" + std::string(EdgeKindName(edge.kind)) + "]->(b)";
    if (edge.weight) out += " SET r.weight = " + FormatWeight(*edge.weight);
    out += ";\n";
  }
  return out;
}

}  // namespace edukg
