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

// Domain types shared by the extraction, linking, weighting and graph layers.

#ifndef EDUKG_CORE_MODEL_H_
#define EDUKG_CORE_MODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edukg {

struct Slide {
  std::string material_id;
  int page_index = 0;
  std::string text;
};

struct LearningMaterial {
  std::string id;
  std::string title;
  std::vector<Slide> slides;
  // Slide texts joined in page order with a single '\n'.
  std::string full_text;

  int num_slides() const { return static_cast<int>(slides.size()); }
};

// Builds a material whose slides are indexed 0..n-1. Throws
// Error(kEmptyMaterial) for an empty list.
LearningMaterial MaterialFromSlides(const std::vector<std::string>& slide_texts,
                                    std::string title, std::string id = "");

// Same as above but accepts an empty slide list. Used by ingestion paths that
// must represent an empty deck; pipelines reject such materials.
LearningMaterial AssembleMaterial(const std::vector<std::string>& slide_texts,
                                  std::string title, std::string id);

// Joins slide texts with '\n'.
std::string JoinSlideTexts(const std::vector<Slide>& slides);

// Whole-material origin is represented by std::nullopt.
struct Keyphrase {
  std::string surface;
  double score = 0.0;
  std::optional<int> origin_slide;
};

struct Concept {
  std::string uri;
  std::string label;
  std::string abstract;
  double w_lm = 0.0;
  std::map<int, double> slide_weights;
  std::map<int, double> importance_per_slide;

  // Records w_Slide for `page` and the derived importance w_Slide + w_LM.
  void SetSlideWeight(int page, double w_slide);
  // Re-derives every importance from the current w_lm.
  void SetMaterialWeight(double w);
  // Adds slide weights of `other` (same uri) that are not yet present.
  void MergeFrom(const Concept& other);
};

struct RelatedConcept {
  std::string uri;
  std::string label;
  double weight = 0.0;
  std::string source_concept_uri;
};

struct Category {
  std::string uri;
  std::string name;
  double weight = 0.0;
};

enum class PipelineMode { kTopDown, kBottomUp };

std::string_view PipelineModeName(PipelineMode mode);
// Accepts "top-down"/"bottom-up" (also "TopDown"/"BottomUp").
PipelineMode ParsePipelineMode(std::string_view name);

struct PipelineConfig {
  PipelineMode mode = PipelineMode::kBottomUp;
  int per_slide_budget = 15;
  int material_budget_factor = 15;
  int linker_support = 5;
  double linker_confidence = 0.35;
  double related_weight_floor = 0.40;
  double category_weight_floor = 0.30;
  int related_cap_per_concept = 10;

  // Throws Error(kInvalidArgument) when a field is out of range.
  void Validate() const;
};

// Human-readable label of a knowledge-base resource: the last path segment
// with percent-escapes decoded and underscores replaced by spaces.
std::string LabelFromUri(std::string_view uri);

// Lowercases ASCII letters; other bytes are left untouched.
std::string CaseFold(std::string_view text);

// Strips leading and trailing ASCII whitespace.
std::string_view Trim(std::string_view text);

}  // namespace edukg

#endif  // EDUKG_CORE_MODEL_H_
