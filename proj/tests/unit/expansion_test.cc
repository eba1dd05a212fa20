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

#include "edukg/expansion.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "edukg/cache.h"
#include "edukg/core_model.h"
#include "edukg/embedding.h"
#include "edukg/error.h"
#include "edukg/graph.h"
#include "edukg/knowledge_base.h"
#include "edukg/run_log.h"
#include "edukg/transport.h"
#include "edukg/weighting.h"
#include "expect_error.h"
#include "oracle.h"

namespace edukg {
namespace {

namespace fs = std::filesystem;

constexpr char kResource[] = "http://dbpedia.org/resource/";
constexpr char kNlp[] =
    "http://dbpedia.org/resource/Natural_language_processing";
constexpr char kNlu[] =
    "http://dbpedia.org/resource/Natural_language_understanding";
constexpr char kCompLingCategory[] =
    "http://dbpedia.org/resource/Category:Computational_linguistics";

// Material whose text mentions computational linguistics so that category
// clears the default floor under the test embedder.
const std::vector<std::string> kLinguisticsSlides = {
    "Computational Linguistics\n"
    "Natural language processing studies computational linguistics.",
    "Machine learning models are trained on text corpora.\n"
    "Natural language understanding is part of computational linguistics."};

// Abstracts recorded in the knowledge-base fixture.
class FixtureAbstracts : public AbstractSource {
 public:
  std::string FetchAbstract(const std::string& uri) override {
    return oracle::KbAbstract(uri);
  }
};

SparqlOptions Fast() {
  SparqlOptions options;
  options.retry.attempts = 1;
  options.retry.initial_backoff = std::chrono::milliseconds(0);
  return options;
}

EduKG GraphWith(const LearningMaterial& material,
                const std::vector<std::string>& uris) {
  EduKG graph;
  AddMaterialNode(graph, material.id, material.title);
  std::vector<Concept> concepts;
  for (const auto& uri : uris) {
    Concept c;
    c.uri = uri;
    c.label = LabelFromUri(uri);
    c.SetMaterialWeight(0.5);
    concepts.push_back(c);
  }
  AddMaterialConcepts(graph, material.id, concepts);
  return graph;
}

double OracleWeight(const std::string& text, const std::string& other) {
  return static_cast<double>(oracle::Similarity(other, text));
}

// Every node and edge of `before` is present unchanged in `after`.
void ExpectMonotone(const EduKG& before, const EduKG& after) {
  for (const auto& [id, node] : before.nodes()) {
    const Node* kept = after.FindNode(id);
    ASSERT_NE(kept, nullptr) << id;
    EXPECT_EQ(*kept, node);
  }
  for (const auto& [key, edge] : before.edges()) {
    const Edge* kept = after.FindEdge(key.src, key.kind, key.dst);
    ASSERT_NE(kept, nullptr) << key.src << " -> " << key.dst;
    EXPECT_EQ(*kept, edge);
  }
}

// Every added node hangs off a pre-existing concept through a new edge.
void ExpectAnchored(const EduKG& before, const EduKG& after) {
  for (const auto& [id, node] : after.nodes()) {
    if (before.FindNode(id) != nullptr) continue;
    const EdgeKind kind = node.kind == NodeKind::kCategory
                              ? EdgeKind::kBelongsTo
                              : EdgeKind::kRelatedTo;
    const auto in = after.InEdges(id, kind);
    ASSERT_FALSE(in.empty()) << id;
    for (const Edge* e : in) {
      const Node* src = before.FindNode(e->src);
      ASSERT_NE(src, nullptr) << e->src;
      EXPECT_EQ(src->kind, NodeKind::kConcept);
      EXPECT_EQ(before.FindEdge(e->src, kind, id), nullptr);
    }
  }
}

TEST(SparqlQueryTest, QueryText) {
  EXPECT_EQ(RelatedQuery(kNlp, 10),
            "SELECT ?o WHERE { <http://dbpedia.org/resource/"
            "Natural_language_processing> "
            "<http://dbpedia.org/ontology/wikiPageWikiLink> ?o } LIMIT 10");
  EXPECT_EQ(CategoryQuery(kNlp),
            "SELECT ?c WHERE { <http://dbpedia.org/resource/"
            "Natural_language_processing> <http://purl.org/dc/terms/subject> "
            "?c }");
}

TEST(SparqlQueryTest, ParseBindings) {
  EXPECT_EQ(ParseSparqlBindings(
                R"({"results":{"bindings":[{"o":{"value":"a"}},{"x":{}},)"
                R"({"o":{"type":"uri","value":"b"}}]}})",
                "o"),
            (std::vector<std::string>{"a", "b"}));
  EXPECT_ERROR_CODE(ParseSparqlBindings("{}", "o"),
                    ErrorCode::kMalformedResponse);
  EXPECT_ERROR_CODE(ParseSparqlBindings("<html/>", "o"),
                    ErrorCode::kMalformedResponse);
}

TEST(LinkedDataClientTest, RelatedIncludesUnderstanding) {
  ReplayTransport replay =
      ReplayTransport::FromFile(oracle::DataPath("service_exchanges.json"));
  LinkedDataClient client(replay, Fast());
  const auto related = client.FetchRelated(kNlp, 10);
  EXPECT_NE(std::find(related.begin(), related.end(), kNlu), related.end());
  EXPECT_EQ(related.front(), kNlu);
}

TEST(LinkedDataClientTest, CategoriesIncludeComputationalLinguistics) {
  ReplayTransport replay =
      ReplayTransport::FromFile(oracle::DataPath("service_exchanges.json"));
  LinkedDataClient client(replay, Fast());
  const auto categories = client.FetchCategories(kNlp);
  EXPECT_NE(std::find(categories.begin(), categories.end(), kCompLingCategory),
            categories.end());
  EXPECT_EQ(client.network_calls(), 1u);
  EXPECT_EQ(client.FetchCategories(kNlp), categories);
  EXPECT_EQ(client.network_calls(), 1u);
}

TEST(LinkedDataClientTest, IsolatedResource) {
  ReplayTransport replay =
      ReplayTransport::FromFile(oracle::DataPath("service_exchanges.json"));
  LinkedDataClient client(replay, Fast());
  const std::string isolated = std::string(kResource) + "Isolated_concept";
  EXPECT_TRUE(client.FetchRelated(isolated, 10).empty());
  EXPECT_TRUE(client.FetchCategories(isolated).empty());
}

TEST(LinkedDataClientTest, CapLimitsResults) {
  ReplayTransport replay =
      ReplayTransport::FromFile(oracle::DataPath("service_exchanges.json"));
  LinkedDataClient client(replay, Fast());
  EXPECT_EQ(
      client.FetchRelated(std::string(kResource) + "Graph_theory", 3).size(),
      3u);
  EXPECT_ERROR_CODE(client.FetchRelated(kNlp, 0), ErrorCode::kInvalidArgument);
}

TEST(LinkedDataClientTest, PersistentCacheServesRepeatCalls) {
  const fs::path dir = fs::temp_directory_path() / "edukg_expansion_test";
  fs::create_directories(dir);
  const std::string path = (dir / "sparql.jsonl").string();
  fs::remove(path);
  std::vector<std::string> first;
  {
    ReplayTransport replay =
        ReplayTransport::FromFile(oracle::DataPath("service_exchanges.json"));
    PersistentCache cache(path);
    LinkedDataClient client(replay, Fast(), &cache);
    first = client.FetchRelated(kNlp, 10);
  }
  ReplayTransport empty;
  PersistentCache cache(path);
  LinkedDataClient client(empty, Fast(), &cache);
  EXPECT_EQ(client.FetchRelated(kNlp, 10), first);
  EXPECT_EQ(client.network_calls(), 0u);
}

TEST(LinkedDataClientTest, OutageThrows) {
  ReplayTransport empty;
  LinkedDataClient client(empty, Fast());
  EXPECT_ERROR_CODE(client.FetchCategories(kNlp),
                    ErrorCode::kServiceUnavailable);
}

TEST(ExpandGraphTest, GainsUnderstandingAndLinguisticsCategory) {
  const LearningMaterial material =
      MaterialFromSlides(kLinguisticsSlides, "Linguistics", "m1");
  ReplayTransport replay =
      ReplayTransport::FromFile(oracle::DataPath("service_exchanges.json"));
  LinkedDataClient client(replay, Fast());
  FixtureAbstracts abstracts;
  HashEmbedder embedder;
  const EduKG before = GraphWith(material, {kNlp});
  ExpansionStats stats;
  const EduKG after =
      ExpandGraph(before, material, PipelineConfig{},
                  {client, abstracts, embedder}, nullptr, &stats);

  const Node* nlu = after.FindNode(kNlu);
  ASSERT_NE(nlu, nullptr);
  EXPECT_EQ(nlu->kind, NodeKind::kRelatedConcept);
  EXPECT_EQ(nlu->label, "Natural language understanding");
  const Node* category = after.FindNode(kCompLingCategory);
  ASSERT_NE(category, nullptr);
  EXPECT_EQ(category->kind, NodeKind::kCategory);
  EXPECT_EQ(category->label, "Computational linguistics");

  // Every recorded candidate is kept exactly when its independently
  // computed weight reaches the floor, with that weight on the edge.
  const PipelineConfig config;
  const std::vector<std::string> related = {
      kNlu, std::string(kResource) + "Computational_linguistics",
      std::string(kResource) + "Speech_recognition",
      std::string(kResource) + "Banana"};
  int kept_related = 0;
  for (const auto& uri : related) {
    const double w = OracleWeight(material.full_text, oracle::KbAbstract(uri));
    const Edge* e = after.FindEdge(kNlp, EdgeKind::kRelatedTo, uri);
    if (w >= config.related_weight_floor) {
      ++kept_related;
      ASSERT_NE(e, nullptr) << uri;
      EXPECT_NEAR(*e->weight, w, 1e-12) << uri;
    } else {
      EXPECT_EQ(e, nullptr) << uri;
      EXPECT_EQ(after.FindNode(uri), nullptr) << uri;
    }
  }
  const std::map<std::string, std::string> categories = {
      {kCompLingCategory, "Computational linguistics"},
      {std::string(kResource) + "Category:Artificial_intelligence",
       "Artificial intelligence"},
      {std::string(kResource) + "Category:Speech_recognition",
       "Speech recognition"}};
  int kept_categories = 0;
  for (const auto& [uri, name] : categories) {
    const double w = OracleWeight(material.full_text, name);
    const Edge* e = after.FindEdge(kNlp, EdgeKind::kBelongsTo, uri);
    if (w >= config.category_weight_floor) {
      ++kept_categories;
      ASSERT_NE(e, nullptr) << uri;
      EXPECT_NEAR(*e->weight, w, 1e-12) << uri;
    } else {
      EXPECT_EQ(e, nullptr) << uri;
    }
  }
  EXPECT_EQ(stats.related_added, kept_related);
  EXPECT_EQ(stats.related_pruned, 4 - kept_related);
  EXPECT_EQ(stats.categories_added, kept_categories);
  EXPECT_EQ(stats.categories_pruned, 3 - kept_categories);
  EXPECT_EQ(stats.main_concepts, 1);
  EXPECT_TRUE(CheckGraph(after).empty());
  ExpectMonotone(before, after);
  ExpectAnchored(before, after);
}

TEST(ExpandGraphTest, ZeroMainConceptsIsNoOp) {
  const LearningMaterial material =
      MaterialFromSlides(kLinguisticsSlides, "Linguistics", "m1");
  ReplayTransport empty;
  LinkedDataClient client(empty, Fast());
  FixtureAbstracts abstracts;
  HashEmbedder embedder;
  const EduKG before = GraphWith(material, {});
  EXPECT_EQ(ExpandGraph(before, material, PipelineConfig{},
                        {client, abstracts, embedder}),
            before);
  EXPECT_EQ(client.network_calls(), 0u);
}

// Picks the filler abstract whose weight against `text` is closest to 0.2.
std::string AbstractWeighing(double target, const std::string& text) {
  const std::vector<std::string> shared = {"graph", "vertices", "edges",
                                           "trees", "paths"};
  const std::vector<std::string> filler = {
      "banana",  "violin", "harbor", "glacier", "saffron", "meadow",
      "lantern", "copper", "orchid", "tundra",  "walnut",  "ember"};
  std::string best;
  double best_gap = 1e9;
  for (size_t s = 1; s <= shared.size(); ++s) {
    for (size_t f = 0; f <= filler.size(); ++f) {
      std::string abstract;
      for (size_t i = 0; i < s; ++i) abstract += shared[i] + " ";
      for (size_t i = 0; i < f; ++i) abstract += filler[i] + " ";
      const double gap = std::abs(OracleWeight(text, abstract) - target);
      if (gap < best_gap) {
        best_gap = gap;
        best = abstract;
      }
    }
  }
  return best;
}

TEST(ExpandGraphTest, LowWeightRelatedIsPruned) {
  const LearningMaterial material = MaterialFromSlides(
      {"Graphs\nA graph has vertices and edges.\nTrees and paths are graphs."},
      "Graphs", "g1");
  const std::string faint_abstract = AbstractWeighing(0.2, material.full_text);
  const double w = OracleWeight(material.full_text, faint_abstract);
  ASSERT_NEAR(w, 0.2, 0.05);

  const std::string pivot = std::string(kResource) + "Pivot";
  const std::string faint = std::string(kResource) + "Faint";
  SimulatedKnowledgeBase kb(
      {KbEntity{pivot, "Pivot", {}, "graph", 100, 1.0, {faint}, {}, true},
       KbEntity{faint, "Faint", {}, faint_abstract, 100, 1.0, {}, {}, false}});
  SparqlOptions sparql = Fast();
  sparql.endpoint = "http://kb.test/sparql";
  LinkedDataClient client(kb, sparql);
  WikipediaOptions wiki;
  wiki.endpoint = "http://kb.test/w/api.php";
  WikipediaAbstractSource abstracts(kb, wiki);
  HashEmbedder embedder;
  const EduKG before = GraphWith(material, {pivot});
  ExpansionStats stats;
  const EduKG after =
      ExpandGraph(before, material, PipelineConfig{},
                  {client, abstracts, embedder}, nullptr, &stats);
  EXPECT_EQ(after, before);
  EXPECT_EQ(stats.related_pruned, 1);
  EXPECT_EQ(stats.related_added, 0);

  // Lowering the floor below the weight keeps it.
  PipelineConfig loose;
  loose.related_weight_floor = w - 1e-9;
  const EduKG kept =
      ExpandGraph(before, material, loose, {client, abstracts, embedder});
  const Edge* e = kept.FindEdge(pivot, EdgeKind::kRelatedTo, faint);
  ASSERT_NE(e, nullptr);
  EXPECT_NEAR(*e->weight, w, 1e-12);
}

TEST(ExpandGraphTest, IdempotentAndMonotone) {
  const LearningMaterial material = MaterialFromSlides(
      {oracle::KbAbstract(kNlp),
       oracle::KbAbstract(std::string(kResource) + "Knowledge_graph")},
      "Mixed", "m2");
  SimulatedKnowledgeBase kb =
      SimulatedKnowledgeBase::FromFile(oracle::DataPath("knowledge_base.json"));
  SparqlOptions sparql = Fast();
  sparql.endpoint = "http://kb.test/sparql";
  LinkedDataClient client(kb, sparql);
  WikipediaOptions wiki;
  wiki.endpoint = "http://kb.test/w/api.php";
  WikipediaAbstractSource abstracts(kb, wiki);
  HashEmbedder embedder;
  PipelineConfig config;
  config.related_weight_floor = 0.1;
  config.category_weight_floor = 0.1;
  const EduKG before =
      GraphWith(material, {kNlp, std::string(kResource) + "Knowledge_graph",
                           std::string(kResource) + "Machine_learning"});
  const EduKG once =
      ExpandGraph(before, material, config, {client, abstracts, embedder});
  EXPECT_GT(once.node_count(), before.node_count());
  const EduKG twice =
      ExpandGraph(once, material, config, {client, abstracts, embedder});
  EXPECT_EQ(twice, once);
  EXPECT_EQ(SerializeGraph(twice), SerializeGraph(once));
  ExpectMonotone(before, once);
  ExpectAnchored(before, once);
  EXPECT_TRUE(CheckGraph(once).empty());
}

TEST(ExpandGraphTest, RelatedMainConceptOnlyGainsEdge) {
  const LearningMaterial material = MaterialFromSlides(
      {oracle::KbAbstract(kNlp) + "\n" + oracle::KbAbstract(kNlu)}, "NLP",
      "m3");
  SimulatedKnowledgeBase kb =
      SimulatedKnowledgeBase::FromFile(oracle::DataPath("knowledge_base.json"));
  SparqlOptions sparql = Fast();
  sparql.endpoint = "http://kb.test/sparql";
  LinkedDataClient client(kb, sparql);
  WikipediaOptions wiki;
  wiki.endpoint = "http://kb.test/w/api.php";
  WikipediaAbstractSource abstracts(kb, wiki);
  HashEmbedder embedder;
  PipelineConfig config;
  config.related_weight_floor = -1.0;
  const EduKG before = GraphWith(material, {kNlp, kNlu});
  const EduKG after =
      ExpandGraph(before, material, config, {client, abstracts, embedder});
  EXPECT_EQ(after.FindNode(kNlu)->kind, NodeKind::kConcept);
  EXPECT_NE(after.FindEdge(kNlp, EdgeKind::kRelatedTo, kNlu), nullptr);
  ExpectMonotone(before, after);
}

TEST(ExpandGraphTest, FetchFailuresAreSkipped) {
  const LearningMaterial material =
      MaterialFromSlides(kLinguisticsSlides, "Linguistics", "m1");
  ReplayTransport empty;
  LinkedDataClient client(empty, Fast());
  FixtureAbstracts abstracts;
  HashEmbedder embedder;
  const EduKG before = GraphWith(material, {kNlp});
  RunLog log;
  ExpansionStats stats;
  const EduKG after = ExpandGraph(before, material, PipelineConfig{},
                                  {client, abstracts, embedder}, &log, &stats);
  EXPECT_EQ(after, before);
  EXPECT_EQ(stats.failures, 1);
  ASSERT_EQ(log.warnings().size(), 1u);
  EXPECT_NE(log.warnings()[0].find(kNlp), std::string::npos);
}

}  // namespace
}  // namespace edukg
