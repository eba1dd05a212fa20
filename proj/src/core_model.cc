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

#include "edukg/core_model.h"

#include <cctype>

#include "edukg/error.h"

namespace edukg {

std::string JoinSlideTexts(const std::vector<Slide>& slides) {
  std::string out;
  for (size_t i = 0; i < slides.size(); ++i) {
    if (i > 0) out += '\n';
    out += slides[i].text;
  }
  return out;
}

LearningMaterial AssembleMaterial(const std::vector<std::string>& slide_texts,
                                  std::string title, std::string id) {
  LearningMaterial material;
  material.id = std::move(id);
  material.title = std::move(title);
  material.slides.reserve(slide_texts.size());
  for (size_t i = 0; i < slide_texts.size(); ++i) {
    material.slides.push_back(
        Slide{material.id, static_cast<int>(i), slide_texts[i]});
  }
  material.full_text = JoinSlideTexts(material.slides);
  return material;
}

LearningMaterial MaterialFromSlides(const std::vector<std::string>& slide_texts,
                                    std::string title, std::string id) {
  if (slide_texts.empty()) {
    throw Error(ErrorCode::kEmptyMaterial, "material has no slides");
  }
  if (id.empty()) id = title;
  return AssembleMaterial(slide_texts, std::move(title), std::move(id));
}

void Concept::SetSlideWeight(int page, double w_slide) {
  slide_weights[page] = w_slide;
  importance_per_slide[page] = w_slide + w_lm;
}

void Concept::SetMaterialWeight(double w) {
  w_lm = w;
  for (const auto& [page, w_slide] : slide_weights) {
    importance_per_slide[page] = w_slide + w_lm;
  }
}

void Concept::MergeFrom(const Concept& other) {
  if (label.empty()) label = other.label;
  if (abstract.empty()) abstract = other.abstract;
  for (const auto& [page, w_slide] : other.slide_weights) {
    if (!slide_weights.contains(page)) SetSlideWeight(page, w_slide);
  }
}

std::string_view PipelineModeName(PipelineMode mode) {
  return mode == PipelineMode::kTopDown ? "top-down" : "bottom-up";
}

PipelineMode ParsePipelineMode(std::string_view name) {
  if (name == "top-down" || name == "TopDown" || name == "topdown") {
    return PipelineMode::kTopDown;
  }
  if (name == "bottom-up" || name == "BottomUp" || name == "bottomup") {
    return PipelineMode::kBottomUp;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown pipeline mode '" + std::string(name) + "'");
}

void PipelineConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "invalid config: " + what);
  };
  if (per_slide_budget <= 0) fail("per_slide_budget must be positive");
  if (material_budget_factor <= 0) {
    fail("material_budget_factor must be positive");
  }
  if (linker_support <= 0) fail("linker_support must be positive");
  if (!(linker_confidence > 0.0 && linker_confidence < 1.0)) {
    fail("linker_confidence must lie in (0, 1)");
  }
  if (!(related_weight_floor >= -1.0 && related_weight_floor <= 1.0)) {
    fail("related_weight_floor must lie in [-1, 1]");
  }
  if (!(category_weight_floor >= -1.0 && category_weight_floor <= 1.0)) {
    fail("category_weight_floor must lie in [-1, 1]");
  }
  if (related_cap_per_concept <= 0) {
    fail("related_cap_per_concept must be positive");
  }
}

namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string LabelFromUri(std::string_view uri) {
  size_t cut = uri.find_last_of('/');
  std::string_view tail =
      cut == std::string_view::npos ? uri : uri.substr(cut + 1);
  std::string label;
  for (size_t i = 0; i < tail.size(); ++i) {
    char c = tail[i];
    if (c == '%' && i + 2 < tail.size()) {
      int hi = HexValue(tail[i + 1]);
      int lo = HexValue(tail[i + 2]);
      if (hi >= 0 && lo >= 0) {
        label += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    label += c == '_' ? ' ' : c;
  }
  return label;
}

std::string CaseFold(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view Trim(std::string_view text) {
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

}  // namespace edukg
