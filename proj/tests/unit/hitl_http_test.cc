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

#include "edukg/hitl_http.h"

#include <gtest/gtest.h>
#include <httplib.h>

#include <chrono>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <thread>

#include "edukg/error.h"
#include "edukg/graph.h"
#include "edukg/hitl.h"
#include "edukg/transport.h"
#include "kb_world.h"
#include "oracle.h"

namespace edukg {
namespace {

using nlohmann::json;
using namespace std::chrono_literals;

constexpr char kResource[] = "http://dbpedia.org/resource/";

std::string R(const std::string& name) { return kResource + name; }

std::string Join(const std::vector<std::string>& texts) {
  std::string out;
  for (size_t i = 0; i < texts.size(); ++i) {
    if (i > 0) out += '\n';
    out += texts[i];
  }
  return out;
}

class HitlHttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_ = std::make_unique<HitlHttpServer>(hitl_);
    port_ = server_->BindToAnyPort("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->ListenAfterBind(); });
    server_->WaitUntilReady();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(30, 0);
  }

  void TearDown() override {
    server_->Stop();
    if (thread_.joinable()) thread_.join();
  }

  struct Reply {
    int status = 0;
    json body;
  };

  static Reply Wrap(const httplib::Result& result) {
    EXPECT_TRUE(result) << httplib::to_string(result.error());
    if (!result) return {};
    Reply reply{result->status, json::parse(result->body, nullptr, false)};
    EXPECT_FALSE(reply.body.is_discarded()) << result->body;
    EXPECT_EQ(result->get_header_value("Content-Type"), "application/json");
    return reply;
  }

  Reply Get(const std::string& path) { return Wrap(client_->Get(path)); }
  Reply Post(const std::string& path, const std::string& body) {
    return Wrap(client_->Post(path, body, "application/json"));
  }
  Reply Delete(const std::string& path, const std::string& body = "") {
    return Wrap(client_->Delete(path, body, "application/json"));
  }

  static std::string Code(const Reply& r) {
    return r.body["error"]["code"].get<std::string>();
  }

  std::string Upload(const std::string& deck, const std::string& id) {
    const Reply r = Post("/materials?title=" + id + "&id=" + id,
                         oracle::ReadText(oracle::DataPath(deck)));
    EXPECT_EQ(r.status, 201) << r.body.dump();
    return r.body["id"];
  }

  // Creates a draft and polls until it leaves Building.
  json ReadyDraft(const std::string& material, const std::string& mode) {
    const Reply created =
        Post("/materials/" + material + "/drafts?mode=" + mode, "");
    EXPECT_EQ(created.status, 202) << created.body.dump();
    const std::string id = created.body["id"];
    for (int i = 0; i < 3000; ++i) {
      const Reply r = Get("/drafts/" + id);
      if (r.body["state"] != "Building") return r.body;
      std::this_thread::sleep_for(10ms);
    }
    ADD_FAILURE() << "draft " << id << " never settled";
    return {};
  }

  oracle::KbWorld world_;
  HitlService hitl_{world_.services(), PipelineConfig{}};
  std::unique_ptr<HitlHttpServer> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST(HttpStatusTest, ErrorMapping) {
  EXPECT_EQ(HttpStatusFor(ErrorCode::kUnknownDraft), 404);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kUnknownConcept), 404);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kUnpublishedMaterial), 404);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kVersionConflict), 409);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kDraftImmutable), 409);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kConflictActiveDraft), 409);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kNotReady), 409);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kUnresolvable), 422);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kBadSlideIndex), 422);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kPipelineFailed), 422);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kMalformedGlyph), 422);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kServiceUnavailable), 503);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kInvalidArgument), 400);
  EXPECT_EQ(HttpStatusFor(ErrorCode::kKOutOfRange), 400);
}

TEST(HttpStatusTest, ErrorBodyShape) {
  const json body = json::parse(ErrorBody(ErrorCode::kVersionConflict, "x"));
  EXPECT_EQ(body["error"]["code"], "VersionConflict");
  EXPECT_EQ(body["error"]["message"], "x");
}

TEST_F(HitlHttpTest, UploadMaterial) {
  const Reply r =
      Post("/materials?title=Deck&id=deck",
           oracle::ReadText(oracle::DataPath("adversarial.glyphs.jsonl")));
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(r.body["id"], "deck");
  EXPECT_EQ(r.body["num_slides"], 5);
  EXPECT_EQ(hitl_.Material("deck").title, "Deck");

  const Reply generated =
      Post("/materials",
           oracle::ReadText(oracle::DataPath("two_slides.glyphs.jsonl")));
  EXPECT_EQ(generated.status, 201);
  EXPECT_FALSE(generated.body["id"].get<std::string>().empty());
}

TEST_F(HitlHttpTest, UploadRejectsBadGlyphs) {
  const Reply r = Post("/materials?id=bad", "{not a glyph\n");
  EXPECT_GE(r.status, 400);
  EXPECT_LT(r.status, 500);
  EXPECT_TRUE(r.body["error"].contains("code"));
  EXPECT_TRUE(r.body["error"].contains("message"));
}

TEST_F(HitlHttpTest, DraftLifecycleErrors) {
  EXPECT_EQ(Post("/materials/nope/drafts", "").status, 404);
  EXPECT_EQ(Code(Post("/materials/nope/drafts", "")), "UnknownMaterial");
  EXPECT_EQ(Get("/drafts/d42").status, 404);
  EXPECT_EQ(Code(Get("/drafts/d42")), "UnknownDraft");
  EXPECT_EQ(Get("/drafts/d42/concepts").status, 404);

  Upload("two_slides.glyphs.jsonl", "two_slides");
  EXPECT_EQ(Post("/materials/two_slides/drafts?mode=sideways", "").status, 400);
  const json draft = ReadyDraft("two_slides", "top-down");
  EXPECT_EQ(draft["state"], "Ready");
  EXPECT_EQ(draft["mode"], "top-down");
  EXPECT_EQ(draft["version"], 1);
  const Reply again = Post("/materials/two_slides/drafts", "");
  EXPECT_EQ(again.status, 409);
  EXPECT_EQ(Code(again), "ConflictActiveDraft");

  LearningMaterial empty;
  empty.id = "empty";
  hitl_.IngestMaterial(empty);
  const Reply failed = Post("/materials/empty/drafts", "");
  EXPECT_EQ(failed.status, 422);
  EXPECT_EQ(Code(failed), "PipelineFailed");
}

TEST_F(HitlHttpTest, ConceptListing) {
  Upload("two_slides.glyphs.jsonl", "two_slides");
  const json draft = ReadyDraft("two_slides", "bottom-up");
  const std::string id = draft["id"];
  const Reply r = Get("/drafts/" + id + "/concepts");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["version"], 1);
  const json& concepts = r.body["concepts"];
  ASSERT_EQ(concepts.size(), 4u);
  EXPECT_EQ(concepts.size(), draft["concept_count"].get<size_t>());
  EXPECT_EQ(concepts[0]["uri"], R("Natural_language_processing"));
  EXPECT_EQ(concepts[0]["label"], "Natural language processing");
  for (size_t i = 1; i < concepts.size(); ++i) {
    EXPECT_GE(concepts[i - 1]["w_lm"].get<double>(),
              concepts[i]["w_lm"].get<double>());
  }
  for (const json& c : concepts) {
    ASSERT_FALSE(c["slides"].empty());
    for (const json& s : c["slides"]) {
      EXPECT_NEAR(s["importance"].get<double>(),
                  s["w_slide"].get<double>() + c["w_lm"].get<double>(), 1e-15);
    }
  }
}

TEST_F(HitlHttpTest, RemoveWithVersionInQueryOrBody) {
  Upload("two_slides.glyphs.jsonl", "two_slides");
  const std::string id = ReadyDraft("two_slides", "bottom-up")["id"];
  const std::string base = "/drafts/" + id + "/concepts/";

  const Reply missing = Delete(base + UrlEncode(R("Machine_learning")));
  EXPECT_EQ(missing.status, 400);
  EXPECT_EQ(Code(missing), "InvalidArgument");

  Reply r =
      Delete(base + UrlEncode(R("Machine_learning")) + "?expected_version=1");
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["version"], 2);

  r = Delete(base + UrlEncode(R("Entity_linking")),
             R"({"expected_version": 1})");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(Code(r), "VersionConflict");

  r = Delete(base + UrlEncode(R("Entity_linking")),
             R"({"expected_version": 2})");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["version"], 3);

  r = Delete(base + UrlEncode(R("Entity_linking")) + "?expected_version=3");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(Code(r), "UnknownConcept");

  r = Delete(base + UrlEncode(R("Knowledge_graph")),
             R"({"expected_version": "three"})");
  EXPECT_EQ(r.status, 400);
  r = Delete(base + UrlEncode(R("Knowledge_graph")), "[1, 2]");
  EXPECT_EQ(r.status, 400);

  const Reply list = Get("/drafts/" + id + "/concepts");
  EXPECT_EQ(list.body["concepts"].size(), 2u);
}

TEST_F(HitlHttpTest, AddConceptErrors) {
  Upload("adversarial.glyphs.jsonl", "adversarial");
  const std::string id = ReadyDraft("adversarial", "bottom-up")["id"];
  const std::string path = "/drafts/" + id + "/concepts";

  Reply r = Post(path, R"({"slides": [0], "expected_version": 1})");
  EXPECT_EQ(r.status, 400);
  r = Post(path, R"({"query": "qwzx blorf vrrk", "slides": [0],
                     "expected_version": 1})");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(Code(r), "Unresolvable");
  r = Post(
      path,
      json{{"query", R("DBpedia")}, {"slides", {5}}, {"expected_version", 1}}
          .dump());
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(Code(r), "BadSlideIndex");
  r = Post(path, R"({"query": "entity linking", "slides": [0]})");
  EXPECT_EQ(r.status, 400);
  r = Post(path, "not json");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(Get("/drafts/" + id).body["version"], 1);

  r = Post(path + "?expected_version=1",
           R"({"query": "entity linking", "slides": [0]})");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["version"], 2);
}

TEST_F(HitlHttpTest, PublishedReadEndpoints) {
  Upload("two_slides.glyphs.jsonl", "two_slides");
  Reply r = Get("/materials/two_slides/edukg");
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(Code(r), "UnpublishedMaterial");
  EXPECT_EQ(Get("/materials/two_slides/slides/0/edukg").status, 404);

  const std::string id = ReadyDraft("two_slides", "bottom-up")["id"];
  r = Post("/drafts/" + id + "/finalize", R"({"expected_version": 1})");
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["state"], "Published");
  EXPECT_EQ(r.body["graph"], "/materials/two_slides/edukg");

  const auto golden =
      oracle::ReadText(oracle::DataPath("golden/two_slides.bottom-up.json"));
  EduKG want = ParseGraph(golden);
  want.status = GraphStatus::kPublished;
  const auto raw = client_->Get("/materials/two_slides/edukg");
  ASSERT_TRUE(raw);
  EXPECT_EQ(raw->status, 200);
  EXPECT_EQ(raw->body, SerializeGraph(want));
  EXPECT_EQ(r.body["nodes"], want.node_count());
  EXPECT_EQ(r.body["edges"], want.edge_count());

  r = Get("/materials/two_slides/slides/1/edukg?k=1");
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body["concepts"].size(), 1u);
  EXPECT_EQ(r.body["concepts"][0]["uri"], R("Knowledge_graph"));
  r = Get("/materials/two_slides/slides/1/edukg");
  EXPECT_EQ(r.body["k"], 5);
  EXPECT_EQ(r.body["concepts"].size(), 2u);
  EXPECT_EQ(Get("/materials/two_slides/slides/1/edukg?k=0").status, 400);
  EXPECT_EQ(Get("/materials/two_slides/slides/1/edukg?k=x").status, 400);
  EXPECT_EQ(Get("/materials/two_slides/slides/9/edukg").status, 404);
  EXPECT_EQ(Get("/materials/nope/edukg").status, 404);
}

TEST_F(HitlHttpTest, ReviewFlowEndToEnd) {
  Upload("adversarial.glyphs.jsonl", "adversarial");
  const std::string id = ReadyDraft("adversarial", "bottom-up")["id"];
  const std::string kg = R("Knowledge_graph");
  const std::string added = R("DBpedia");

  Reply r = Delete("/drafts/" + id + "/concepts/" + UrlEncode(kg),
                   R"({"expected_version": 1})");
  ASSERT_EQ(r.status, 200);
  r = Post(
      "/drafts/" + id + "/concepts",
      json{{"query", added}, {"slides", {2}}, {"expected_version", 2}}.dump());
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["version"], 3);

  r = Post("/drafts/" + id + "/finalize", R"({"expected_version": 3})");
  ASSERT_EQ(r.status, 200) << r.body.dump();
  const auto raw = client_->Get("/materials/adversarial/edukg");
  ASSERT_TRUE(raw);
  const EduKG g = ParseGraph(raw->body);
  EXPECT_EQ(g.status, GraphStatus::kPublished);
  // The removed concept and everything expanded from it are gone.
  EXPECT_EQ(g.FindNode(kg), nullptr);
  EXPECT_EQ(g.FindNode(R("Category:Graph_databases")), nullptr);

  const auto texts = oracle::ExpectedSlideTexts("adversarial.glyphs.jsonl");
  const std::string abstract = oracle::KbAbstract(added);
  const long double w_lm = oracle::Similarity(abstract, Join(texts));
  const long double w_slide = oracle::Similarity(abstract, texts[2]);
  const Edge* edge =
      g.FindEdge(SlideNodeId("adversarial", 2), EdgeKind::kContains, added);
  ASSERT_NE(edge, nullptr);
  EXPECT_NEAR(*edge->weight, static_cast<double>(w_slide), 1e-12);

  r = Get("/materials/adversarial/slides/2/edukg?k=5");
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body["concepts"].size(), 1u);
  EXPECT_EQ(r.body["concepts"][0]["uri"], added);
  EXPECT_NEAR(r.body["concepts"][0]["importance"].get<double>(),
              static_cast<double>(w_slide + w_lm), 1e-12);

  r = Post("/drafts/" + id + "/finalize", R"({"expected_version": 4})");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(Code(r), "DraftImmutable");
  r = Delete("/drafts/" + id + "/concepts/" + UrlEncode(added),
             R"({"expected_version": 4})");
  EXPECT_EQ(Code(r), "DraftImmutable");
  EXPECT_EQ(Get("/drafts/" + id).body["state"], "Published");
}

TEST_F(HitlHttpTest, ConcurrentRequests) {
  Upload("two_slides.glyphs.jsonl", "two_slides");
  const std::string id = ReadyDraft("two_slides", "bottom-up")["id"];
  const std::vector<std::string> uris = {
      R("Natural_language_processing"), R("Knowledge_graph"),
      R("Entity_linking"), R("Machine_learning")};
  std::vector<int> statuses(uris.size());
  std::vector<std::thread> threads;
  for (size_t i = 0; i < uris.size(); ++i) {
    threads.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", port_);
      auto res = c.Delete("/drafts/" + id + "/concepts/" + UrlEncode(uris[i]),
                          R"({"expected_version": 1})", "application/json");
      statuses[i] = res ? res->status : -1;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(std::count(statuses.begin(), statuses.end(), 200), 1);
  EXPECT_EQ(std::count(statuses.begin(), statuses.end(), 409), 3);
  EXPECT_EQ(Get("/drafts/" + id).body["version"], 2);
}

}  // namespace
}  // namespace edukg
