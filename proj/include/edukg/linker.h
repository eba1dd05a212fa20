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

// Entity linking against an annotation web service speaking the DBpedia
// Spotlight protocol.

#ifndef EDUKG_LINKER_H_
#define EDUKG_LINKER_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edukg/core_model.h"
#include "edukg/run_log.h"
#include "edukg/transport.h"

namespace edukg {

struct AnnotationHit {
  std::string uri;
  std::string surface_form;
  double similarity_score = 0.0;
  int offset = 0;
  int support = 0;
};

class EntityLinker {
 public:
  virtual ~EntityLinker() = default;

  // Throws Error(kEmptyText) for blank text.
  virtual std::vector<AnnotationHit> Annotate(std::string_view text,
                                              double confidence = 0.35,
                                              int support = 5) = 0;

  // Links keyphrase surfaces to concept shells (uri and label only),
  // deduplicated by uri in order of first appearance. A failing batch is
  // skipped with a warning in `log`.
  virtual std::vector<Concept> LinkKeyphrases(
      std::span<const Keyphrase> keyphrases, const PipelineConfig& config,
      RunLog* log = nullptr);
};

struct SpotlightOptions {
  std::string endpoint = "https://api.dbpedia-spotlight.org/en/annotate";
  RetryPolicy retry;
  int max_in_flight = 4;
  // Keyphrase surfaces per annotate request; surfaces are newline-joined.
  size_t batch_size = 50;
};

class SpotlightClient : public EntityLinker {
 public:
  SpotlightClient(Transport& transport, SpotlightOptions options = {});

  std::vector<AnnotationHit> Annotate(std::string_view text,
                                      double confidence = 0.35,
                                      int support = 5) override;
  std::vector<Concept> LinkKeyphrases(std::span<const Keyphrase> keyphrases,
                                      const PipelineConfig& config,
                                      RunLog* log = nullptr) override;

  static HttpRequest BuildRequest(const std::string& endpoint,
                                  std::string_view text, double confidence,
                                  int support);

 private:
  Transport& transport_;
  SpotlightOptions options_;
  InFlightLimiter limiter_;
};

// Parses the service's JSON answer. A response without a "Resources" member
// means no entity was found. Throws Error(kMalformedResponse).
std::vector<AnnotationHit> ParseAnnotationResponse(std::string_view body);

// Formats a confidence value the way it is sent on the wire ("0.35").
std::string FormatConfidence(double confidence);

}  // namespace edukg

#endif  // EDUKG_LINKER_H_
