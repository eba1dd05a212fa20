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

// An in-process stand-in for the annotation service, the SPARQL endpoint and
// the article-extract API, answering in their wire formats from a small
// entity table. Requests are routed by URL path suffix: "/annotate",
// "/sparql" and "/api.php".

#ifndef EDUKG_KNOWLEDGE_BASE_H_
#define EDUKG_KNOWLEDGE_BASE_H_

#include <atomic>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edukg/transport.h"

namespace edukg {

struct KbEntity {
  std::string uri;
  std::string label;
  std::vector<std::string> aliases;
  std::string abstract;
  int support = 100;
  double similarity = 1.0;
  std::vector<std::string> related;
  std::vector<std::string> categories;
  // False for entities that only exist as expansion targets.
  bool spot = true;
};

class SimulatedKnowledgeBase : public Transport {
 public:
  SimulatedKnowledgeBase() = default;
  explicit SimulatedKnowledgeBase(std::vector<KbEntity> entities);
  SimulatedKnowledgeBase(SimulatedKnowledgeBase&& other) noexcept
      : entities_(std::move(other.entities_)),
        by_uri_(std::move(other.by_uri_)) {}

  // {"entities": [{"uri", "label", "aliases", "abstract", "support",
  //                "similarity", "related", "categories", "spot"}]}
  static SimulatedKnowledgeBase FromJson(std::string_view content);
  static SimulatedKnowledgeBase FromFile(const std::string& path);

  HttpResponse Send(const HttpRequest& request) override;

  const std::vector<KbEntity>& entities() const { return entities_; }
  size_t annotate_calls() const { return annotate_calls_.load(); }
  size_t sparql_calls() const { return sparql_calls_.load(); }
  size_t article_calls() const { return article_calls_.load(); }

  // Route handlers, exposed for tests.
  std::string Annotate(std::string_view text, double confidence,
                       int support) const;
  std::string Sparql(std::string_view query) const;
  std::string Article(std::string_view title) const;

 private:
  const KbEntity* FindByUri(std::string_view uri) const;

  std::vector<KbEntity> entities_;
  std::map<std::string, size_t, std::less<>> by_uri_;
  std::atomic<size_t> annotate_calls_{0};
  std::atomic<size_t> sparql_calls_{0};
  std::atomic<size_t> article_calls_{0};
};

}  // namespace edukg

#endif  // EDUKG_KNOWLEDGE_BASE_H_
