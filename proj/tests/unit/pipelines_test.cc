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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "edukg/core_model.h"
#include "edukg/embedding.h"
#include "edukg/error.h"
#include "edukg/expansion.h"
#include "edukg/graph.h"
#include "edukg/graph_store.h"
#include "edukg/keyphrase.h"
#include "edukg/knowledge_base.h"
#include "edukg/layout.h"
#include "edukg/linker.h"
#include "edukg/run_log.h"
#include "edukg/weighting.h"
#include "expect_error.h"
#include "oracle.h"

namespace edukg {
namespace {

namespace fs = std::filesystem;

constexpr char kResource[] = "http://dbpedia.org/resource/";

const std::vector<std::string> kTwoSlideTexts =
    oracle::ExpectedSlideTexts("two_slides.glyphs.jsonl");
const std::vector<std::string> kAdversarialTexts =
    oracle::ExpectedSlideTexts("adversarial.glyphs.jsonl");

std::string Join(const std::vector<std::string>& texts) {
  std::string out;
  for (size_t i = 0; i < texts.size(); ++i) {
    if (i > 0) out += '\n';
    out += texts[i];
  }
  return out;
}

SpotlightOptions FastSpotlight() {
  SpotlightOptions o;
  o.retry.attempts = 1;
  return o;
}
WikipediaOptions FastWikipedia() {
  WikipediaOptions o;
  o.retry.attempts = 1;
  return o;
}
SparqlOptions FastSparql() {
  SparqlOptions o;
  o.retry.attempts = 1;
  return o;
}

// Ranker wrapper that records every call and can fail on demand.
class RecordingRanker : public KeyphraseRanker {
 public:
  explicit RecordingRanker(KeyphraseRanker& inner) : inner_(inner) {}
  std::vector<Keyphrase> Rank(std::string_view text, int budget,
                              std::optional<int> origin_slide) override {
    std::lock_guard lock(mu_);
    const int slide = origin_slide.value_or(-1);
    if (failures_left_[slide] > 0) {
      --failures_left_[slide];
      throw Error(ErrorCode::kEmbeddingUnavailable, "injected failure");
    }
    auto out = inner_.Rank(text, budget, origin_slide);
    calls.push_back({slide, budget, static_cast<int>(out.size())});
    return out;
  }
  void FailSlide(int slide, int times) { failures_left_[slide] = times; }
  struct Call {
    int slide;
    int budget;
    int returned;
  };
  std::vector<Call> calls;

 private:
  KeyphraseRanker& inner_;
  std::mutex mu_;
  std::map<int, int> failures_left_;
};

// Services backed by the simulated knowledge base and the test embedder.
struct World {
  SimulatedKnowledgeBase kb =
      SimulatedKnowledgeBase::FromFile(oracle::DataPath("knowledge_base.json"));
  HashEmbedder embedder;
  EmbeddingRanker base_ranker{embedder};
  RecordingRanker ranker{base_ranker};
  SpotlightClient linker{kb, FastSpotlight()};
  WikipediaAbstractSource abstracts{kb, FastWikipedia()};
  LinkedDataClient linked_data{kb, FastSparql()};
  GraphStore store;

  PipelineServices services() {
    return PipelineServices{ranker,   linker,      abstracts,
                            embedder, linked_data, store};
  }
};

LearningMaterial Load(const std::string& file, const std::string& id) {
  return ExtractSlides(ReadGlyphFile(oracle::DataPath(file)), {}, id, id);
}

PipelineConfig Config(PipelineMode mode) {
  PipelineConfig config;
  config.mode = mode;
  return config;
}

std::set<std::string> MaterialConcepts(const EduKG& g, const std::string& id) {
  std::set<std::string> out;
  for (const Edge* e : g.OutEdges(MaterialNodeId(id), EdgeKind::kContains)) {
    out.insert(e->dst);
  }
  return out;
}

std::set<std::string> SlideConcepts(const EduKG& g, const std::string& id,
                                    int slides) {
  std::set<std::string> out;
  for (int p = 0; p < slides; ++p) {
    for (const Edge* e : g.OutEdges(SlideNodeId(id, p), EdgeKind::kContains)) {
      out.insert(e->dst);
    }
  }
  return out;
}

std::set<std::string> ConceptNodes(const EduKG& g) {
  std::set<std::string> out;
  for (const auto& [id, node] : g.nodes()) {
    if (node.kind == NodeKind::kConcept) out.insert(id);
  }
  return out;
}

TEST(ExtractedTextTest, FixturesMatchHandWrittenTexts) {
  const auto two = Load("two_slides.glyphs.jsonl", "two");
  ASSERT_EQ(two.num_slides(), 2);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(two.slides[i].text, kTwoSlideTexts[i]);
  EXPECT_EQ(two.full_text, Join(kTwoSlideTexts));
  const auto adv = Load("adversarial.glyphs.jsonl", "adv");
  ASSERT_EQ(adv.num_slides(), 5);
  for (int i = 0; i < 5; ++i)
    EXPECT_EQ(adv.slides[i].text, kAdversarialTexts[i]);
}

TEST(TopDownTest, SlideConceptsComeFromMaterialLevel) {
  for (const char* file :
       {"two_slides.glyphs.jsonl", "adversarial.glyphs.jsonl"}) {
    World world;
    const auto material = Load(file, "m");
    RunOptions options;
    options.expand = false;
    const auto pre = RunTopDown(material, world.services(),
                                Config(PipelineMode::kTopDown), options);
    const auto material_set = MaterialConcepts(pre.graph, "m");
    const auto slide_set = SlideConcepts(pre.graph, "m", material.num_slides());
    EXPECT_FALSE(material_set.empty()) << file;
    EXPECT_TRUE(std::includes(material_set.begin(), material_set.end(),
                              slide_set.begin(), slide_set.end()))
        << file;

    World again;
    const auto full =
        RunTopDown(material, again.services(), Config(PipelineMode::kTopDown));
    EXPECT_EQ(ConceptNodes(full.graph), material_set) << file;
    EXPECT_EQ(SlideConcepts(full.graph, "m", material.num_slides()), slide_set);
    EXPECT_TRUE(CheckGraph(full.graph).empty());
  }
}

TEST(TopDownTest, SlideOnlyConceptIsDiscarded) {
  const auto material = Load("adversarial.glyphs.jsonl", "adv");
  const std::string zermelo = std::string(kResource) + "Zermelo_set_theory";
  const std::string goedel = std::string(kResource) + "Kurt_G%C3%B6del";

  // The fixture really does link both on slide 3.
  World bottom;
  const auto bu =
      RunBottomUp(material, bottom.services(), Config(PipelineMode::kBottomUp));
  EXPECT_NE(
      bu.graph.FindEdge(SlideNodeId("adv", 3), EdgeKind::kContains, zermelo),
      nullptr);
  EXPECT_NE(
      bu.graph.FindEdge(SlideNodeId("adv", 3), EdgeKind::kContains, goedel),
      nullptr);

  World top;
  const auto td =
      RunTopDown(material, top.services(), Config(PipelineMode::kTopDown));
  EXPECT_EQ(td.graph.FindNode(zermelo), nullptr);
  EXPECT_EQ(td.graph.FindNode(goedel), nullptr);
  EXPECT_EQ(td.report.discarded_slide_concepts, 2);
  EXPECT_TRUE(
      td.graph.OutEdges(SlideNodeId("adv", 3), EdgeKind::kContains).empty());
}

TEST(BottomUpTest, CarryOverAndIncrementalVisibility) {
  for (const char* file :
       {"two_slides.glyphs.jsonl", "adversarial.glyphs.jsonl"}) {
    World world;
    const auto material = Load(file, "m");
    std::vector<int> fired;
    RunOptions options;
    options.expand = false;
    options.on_slide_committed = [&](int page, const EduKG& snapshot) {
      fired.push_back(page);
      // Everything up to this slide is visible, nothing after it.
      for (int p = 0; p < material.num_slides(); ++p) {
        EXPECT_EQ(snapshot.FindNode(SlideNodeId("m", p)) != nullptr, p <= page)
            << file << " slide " << p << " at commit " << page;
      }
      // The next slide has not been ranked yet.
      EXPECT_EQ(world.ranker.calls.size(), static_cast<size_t>(page + 1));
      EXPECT_EQ(world.kb.sparql_calls(), 0u);
    };
    const auto pre = RunBottomUp(material, world.services(),
                                 Config(PipelineMode::kBottomUp), options);
    std::vector<int> want(material.num_slides());
    std::iota(want.begin(), want.end(), 0);
    EXPECT_EQ(fired, want) << file;
    EXPECT_EQ(MaterialConcepts(pre.graph, "m"),
              SlideConcepts(pre.graph, "m", material.num_slides()))
        << file;
    EXPECT_TRUE(CheckGraph(pre.graph).empty());
  }
}

TEST(BudgetTest, NeverExceeded) {
  for (const char* file :
       {"two_slides.glyphs.jsonl", "adversarial.glyphs.jsonl"}) {
    const auto material = Load(file, "m");
    {
      World world;
      const auto r = RunTopDown(material, world.services(),
                                Config(PipelineMode::kTopDown));
      ASSERT_EQ(world.ranker.calls.size(),
                static_cast<size_t>(material.num_slides() + 1));
      EXPECT_EQ(world.ranker.calls[0].slide, -1);
      EXPECT_EQ(world.ranker.calls[0].budget, 15 * material.num_slides());
      EXPECT_LE(world.ranker.calls[0].returned, 15 * material.num_slides());
      for (size_t i = 1; i < world.ranker.calls.size(); ++i) {
        EXPECT_EQ(world.ranker.calls[i].budget, 15);
        EXPECT_LE(world.ranker.calls[i].returned, 15);
      }
      EXPECT_EQ(r.report.material_keyphrase_budget, 15 * material.num_slides());
      EXPECT_LE(r.report.material_keyphrases,
                r.report.material_keyphrase_budget);
    }
    {
      World world;
      const auto r = RunBottomUp(material, world.services(),
                                 Config(PipelineMode::kBottomUp));
      ASSERT_EQ(world.ranker.calls.size(),
                static_cast<size_t>(material.num_slides()));
      for (const auto& call : world.ranker.calls) {
        EXPECT_EQ(call.budget, 15);
        EXPECT_LE(call.returned, 15);
      }
      for (int n : r.report.slide_keyphrases) EXPECT_LE(n, 15);
    }
  }
  // The dense first adversarial slide actually hits the cap.
  World world;
  const auto r = RunBottomUp(Load("adversarial.glyphs.jsonl", "m"),
                             world.services(), Config(PipelineMode::kBottomUp));
  EXPECT_EQ(r.report.slide_keyphrases[0], 15);
}

TEST(ExpansionOrderTest, RunsOnceAfterAllSlides) {
  for (PipelineMode mode : {PipelineMode::kTopDown, PipelineMode::kBottomUp}) {
    World world;
    const auto material = Load("two_slides.glyphs.jsonl", "m");
    const auto r = RunPipeline(material, world.services(), Config(mode));
    EXPECT_EQ(r.report.expansion_runs, 1);
    const auto& events = r.report.events;
    ASSERT_FALSE(events.empty());
    EXPECT_EQ(std::count(events.begin(), events.end(), "expansion"), 1);
    EXPECT_EQ(events.back(), "expansion");
    EXPECT_EQ(std::count(events.begin(), events.end(), "commit:slide:1"), 1);
    std::vector<std::string> want;
    if (mode == PipelineMode::kTopDown) want.push_back("rank:material");
    for (int p = 0; p < 2; ++p) {
      want.push_back("rank:slide:" + std::to_string(p));
      want.push_back("commit:slide:" + std::to_string(p));
    }
    want.push_back("expansion");
    EXPECT_EQ(events, want);
  }
}

std::string GoldenPath(const std::string& name) {
  return oracle::DataPath("golden/" + name);
}

void CheckGolden(const std::string& name, const std::string& document) {
  const std::string path = GoldenPath(name);
  if (std::getenv("EDUKG_UPDATE_GOLDEN") != nullptr) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream(path, std::ios::binary) << document;
  }
  ASSERT_TRUE(fs::exists(path)) << path;
  EXPECT_EQ(oracle::ReadText(path), document) << name;
}

struct GoldenCase {
  const char* file;
  const char* id;
  PipelineMode mode;
  const std::vector<std::string>* texts;
};

const GoldenCase kGoldenCases[] = {
    {"two_slides.glyphs.jsonl", "two_slides", PipelineMode::kTopDown,
     &kTwoSlideTexts},
    {"two_slides.glyphs.jsonl", "two_slides", PipelineMode::kBottomUp,
     &kTwoSlideTexts},
    {"adversarial.glyphs.jsonl", "adversarial", PipelineMode::kTopDown,
     &kAdversarialTexts},
    {"adversarial.glyphs.jsonl", "adversarial", PipelineMode::kBottomUp,
     &kAdversarialTexts},
};

std::string GoldenName(const GoldenCase& c) {
  return std::string(c.id) + "." + std::string(PipelineModeName(c.mode)) +
         ".json";
}

TEST(GoldenTest, ByteIdenticalAcrossRuns) {
  for (const auto& c : kGoldenCases) {
    const auto material = Load(c.file, c.id);
    World first;
    World second;
    const auto a = RunPipeline(material, first.services(), Config(c.mode));
    const auto b = RunPipeline(material, second.services(), Config(c.mode));
    const std::string doc = SerializeGraph(a.graph);
    EXPECT_EQ(doc, SerializeGraph(b.graph));
    EXPECT_EQ(a.report.ToJson(), b.report.ToJson());
    CheckGolden(GoldenName(c), doc);
  }
}

// Re-derives every weight of a golden graph from the knowledge-base
// abstracts and the hand-written slide texts.
TEST(GoldenTest, EveryWeightMatchesOracle) {
  for (const auto& c : kGoldenCases) {
    const std::string name = GoldenName(c);
    const EduKG g = ParseGraph(oracle::ReadText(GoldenPath(name)));
    const std::string full_text = Join(*c.texts);
    const std::string material_node = MaterialNodeId(c.id);
    int checked = 0;
    for (const auto& [key, edge] : g.edges()) {
      if (edge.kind == EdgeKind::kHasSlide) {
        EXPECT_FALSE(edge.weight.has_value());
        continue;
      }
      ASSERT_TRUE(edge.weight.has_value()) << name << " " << key.dst;
      long double want = 0;
      if (edge.kind == EdgeKind::kContains && edge.src == material_node) {
        want = oracle::Similarity(oracle::KbAbstract(edge.dst), full_text);
      } else if (edge.kind == EdgeKind::kContains) {
        const int page = std::stoi(edge.src.substr(edge.src.rfind(':') + 1));
        want =
            oracle::Similarity(oracle::KbAbstract(edge.dst), c.texts->at(page));
      } else if (edge.kind == EdgeKind::kRelatedTo) {
        want = oracle::Similarity(oracle::KbAbstract(edge.dst), full_text);
      } else {
        std::string category = edge.dst.substr(edge.dst.find("Category:") + 9);
        std::replace(category.begin(), category.end(), '_', ' ');
        want = oracle::Similarity(category, full_text);
      }
      EXPECT_NEAR(*edge.weight, static_cast<double>(want), 1e-12)
          << name << " " << edge.src << " -> " << edge.dst;
      ++checked;
    }
    EXPECT_GT(checked, 0) << name;
  }
}

TEST(GoldenTest, BottomUpImportanceIsSlidePlusMaterialWeight) {
  const EduKG g =
      ParseGraph(oracle::ReadText(GoldenPath("two_slides.bottom-up.json")));
  const std::string full_text = Join(kTwoSlideTexts);
  int checked = 0;
  for (int page = 0; page < 2; ++page) {
    for (const Concept& c : TopSlideConcepts(g, "two_slides", page, 100)) {
      const std::string abstract = oracle::KbAbstract(c.uri);
      const double w_slide = static_cast<double>(
          oracle::Similarity(abstract, kTwoSlideTexts[page]));
      const double w_lm =
          static_cast<double>(oracle::Similarity(abstract, full_text));
      EXPECT_NEAR(c.importance_per_slide.at(page), w_slide + w_lm, 1e-12)
          << c.uri;
      ++checked;
    }
  }
  EXPECT_GE(checked, 4);
}

TEST(GoldenTest, TwoSlideBottomUpShape) {
  const EduKG g =
      ParseGraph(oracle::ReadText(GoldenPath("two_slides.bottom-up.json")));
  std::set<std::string> want;
  for (const char* name : {"Natural_language_processing", "Machine_learning",
                           "Knowledge_graph", "Entity_linking"}) {
    want.insert(std::string(kResource) + name);
  }
  const auto main = ConceptNodes(g);
  EXPECT_TRUE(
      std::includes(main.begin(), main.end(), want.begin(), want.end()));
  EXPECT_NE(
      g.FindNode(std::string(kResource) + "Natural_language_understanding"),
      nullptr);
}

TEST(SlideRetryTest, FailureRetriedOnce) {
  World world;
  world.ranker.FailSlide(1, 1);
  const auto material = Load("two_slides.glyphs.jsonl", "m");
  const auto r =
      RunBottomUp(material, world.services(), Config(PipelineMode::kBottomUp));
  EXPECT_EQ(r.report.skipped_slides, 0);
  EXPECT_EQ(r.report.warnings.size(), 1u);
  EXPECT_FALSE(
      r.graph.OutEdges(SlideNodeId("m", 1), EdgeKind::kContains).empty());

  World clean;
  EXPECT_EQ(SerializeGraph(RunBottomUp(material, clean.services(),
                                       Config(PipelineMode::kBottomUp))
                               .graph),
            SerializeGraph(r.graph));
}

TEST(SlideRetryTest, PersistentFailureSkipsSlide) {
  for (PipelineMode mode : {PipelineMode::kTopDown, PipelineMode::kBottomUp}) {
    World world;
    world.ranker.FailSlide(0, 2);
    std::vector<int> fired;
    RunOptions options;
    options.on_slide_committed = [&](int page, const EduKG&) {
      fired.push_back(page);
    };
    const auto material = Load("two_slides.glyphs.jsonl", "m");
    const auto r =
        RunPipeline(material, world.services(), Config(mode), options);
    EXPECT_EQ(r.report.skipped_slides, 1);
    EXPECT_EQ(r.report.warnings.size(), 2u);
    ASSERT_NE(r.graph.FindNode(SlideNodeId("m", 0)), nullptr);
    EXPECT_TRUE(
        r.graph.OutEdges(SlideNodeId("m", 0), EdgeKind::kContains).empty());
    EXPECT_FALSE(
        r.graph.OutEdges(SlideNodeId("m", 1), EdgeKind::kContains).empty());
    if (mode == PipelineMode::kBottomUp) {
      EXPECT_EQ(fired, (std::vector<int>{0, 1}));
    }
  }
}

TEST(PipelineTest, EmptyMaterialRejected) {
  World world;
  const LearningMaterial empty = AssembleMaterial({}, "Empty", "e");
  EXPECT_ERROR_CODE(
      RunTopDown(empty, world.services(), Config(PipelineMode::kTopDown)),
      ErrorCode::kEmptyMaterial);
  EXPECT_ERROR_CODE(
      RunBottomUp(empty, world.services(), Config(PipelineMode::kBottomUp)),
      ErrorCode::kEmptyMaterial);
}

TEST(PipelineTest, BlankSlidesStillGetNodes) {
  World world;
  const auto material = Load("layout_three_pages.glyphs.jsonl", "three");
  const auto r =
      RunBottomUp(material, world.services(), Config(PipelineMode::kBottomUp));
  for (int p = 0; p < 3; ++p) {
    const Node* slide = r.graph.FindNode(SlideNodeId("three", p));
    ASSERT_NE(slide, nullptr);
    EXPECT_EQ(slide->label, "Slide " + std::to_string(p + 1));
  }
}

TEST(PipelineTest, ParallelSlidesCommitInPageOrder) {
  const auto material = Load("adversarial.glyphs.jsonl", "adv");
  World sequential;
  const auto a = RunBottomUp(material, sequential.services(),
                             Config(PipelineMode::kBottomUp));
  World parallel;
  std::vector<int> fired;
  RunOptions options;
  options.parallel_slides = 4;
  options.on_slide_committed = [&](int page, const EduKG&) {
    fired.push_back(page);
  };
  const auto b = RunBottomUp(material, parallel.services(),
                             Config(PipelineMode::kBottomUp), options);
  EXPECT_EQ(fired, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(SerializeGraph(b.graph), SerializeGraph(a.graph));
}

TEST(PipelineTest, ReportJson) {
  World world;
  const auto r = RunTopDown(Load("adversarial.glyphs.jsonl", "adv"),
                            world.services(), Config(PipelineMode::kTopDown));
  const std::string json = r.report.ToJson();
  EXPECT_NE(json.find("\"mode\": \"top-down\""), std::string::npos) << json;
  EXPECT_NE(json.find("\"material_keyphrase_budget\": 75"), std::string::npos);
  EXPECT_NE(json.find("\"discarded_slide_concepts\": 2"), std::string::npos);
  EXPECT_EQ(r.report.nodes, r.graph.node_count());
  EXPECT_EQ(r.report.edges, r.graph.edge_count());
}

}  // namespace
}  // namespace edukg
