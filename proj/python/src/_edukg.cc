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

// Python bindings: slide extraction, graph construction against an offline
// knowledge base, weighting and evaluation helpers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "edukg/app.h"
#include "edukg/embedding.h"
#include "edukg/error.h"
#include "edukg/evaluation.h"
#include "edukg/graph.h"
#include "edukg/layout.h"
#include "edukg/pipelines.h"

namespace py = pybind11;

namespace {

edukg::JudgedRanking Ranking(const std::vector<bool>& relevant) {
  edukg::JudgedRanking ranking;
  for (size_t i = 0; i < relevant.size(); ++i) {
    ranking.items.push_back({std::to_string(i), relevant[i]});
  }
  return ranking;
}

std::vector<std::string> SlideTexts(const std::string& glyphs) {
  const edukg::LearningMaterial material =
      edukg::ExtractSlides(edukg::ParseGlyphDocument(glyphs));
  std::vector<std::string> texts;
  for (const edukg::Slide& slide : material.slides) texts.push_back(slide.text);
  return texts;
}

py::tuple Build(const std::string& glyphs, const std::string& material_id,
                const std::string& mode, const std::string& config_json) {
  edukg::AppConfig config = edukg::ParseAppConfig(
      config_json.empty() ? std::string("{}") : config_json);
  config.pipeline.mode = edukg::ParsePipelineMode(mode);
  const edukg::LearningMaterial material = edukg::ExtractSlides(
      edukg::ParseGlyphDocument(glyphs), {}, material_id, material_id);
  edukg::PipelineResult result;
  {
    py::gil_scoped_release release;
    edukg::ServiceBundle bundle(config);
    result = edukg::RunPipeline(material, bundle.services(), config.pipeline);
  }
  return py::make_tuple(edukg::SerializeGraph(result.graph),
                        result.report.ToJson());
}

double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  return edukg::Cosine(edukg::EmbeddingVector{a}, edukg::EmbeddingVector{b});
}

py::dict Srs(int accurate, int n, double z, double moe) {
  edukg::SrsSession session(z, moe);
  for (int i = 0; i < n; ++i) {
    edukg::Judgment j;
    j.triple_id = "t" + std::to_string(i);
    j.annotator = "a";
    j.value = i < accurate ? 1 : 0;
    session.AddJudgment(j);
  }
  const edukg::SrsEstimate estimate = edukg::EstimateAccuracy(session);
  py::dict out;
  out["mu"] = estimate.mu;
  out["n"] = estimate.n;
  out["half_width"] = estimate.half_width;
  out["moe"] = estimate.moe;
  out["stop"] = estimate.stop;
  out["display"] = edukg::FormatEstimate(estimate);
  return out;
}

}  // namespace

PYBIND11_MODULE(_edukg, m) {
  m.doc() = "Educational knowledge graph construction";

  // Messages carry the stable code name, e.g. "EmptyMaterial: ...".
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error;
  error.call_once_and_store_result(
      [&]() { return py::exception<edukg::Error>(m, "EdukgError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const edukg::Error& e) {
      const std::string message =
          std::string(edukg::ErrorCodeName(e.code())) + ": " + e.what();
      py::set_error(error.get_stored(), message.c_str());
    }
  });

  m.def("slide_texts", &SlideTexts, py::arg("glyphs"),
        "Slide strings extracted from a glyph document (JSON lines).");
  m.def("build", &Build, py::arg("glyphs"), py::arg("material_id"),
        py::arg("mode") = "bottom-up", py::arg("config_json") = "",
        "Runs a pipeline; returns (graph document, run report).");
  m.def(
      "export_cypher",
      [](const std::string& graph) {
        return edukg::ExportCypher(edukg::ParseGraph(graph));
      },
      py::arg("graph"));
  m.def("cosine", &Cosine, py::arg("a"), py::arg("b"));
  m.def(
      "precision_at_k",
      [](const std::vector<bool>& relevant, int k) {
        return edukg::PrecisionAtK(Ranking(relevant), k);
      },
      py::arg("relevant"), py::arg("k"));
  m.def(
      "reciprocal_rank",
      [](const std::vector<bool>& relevant) {
        return edukg::ReciprocalRank(Ranking(relevant));
      },
      py::arg("relevant"));
  m.def(
      "average_precision_at_k",
      [](const std::vector<bool>& relevant, int k) {
        return edukg::AveragePrecisionAtK(Ranking(relevant), k);
      },
      py::arg("relevant"), py::arg("k"));
  m.def("srs_estimate", &Srs, py::arg("accurate"), py::arg("n"),
        py::arg("z") = edukg::kDefaultZ,
        py::arg("moe") = edukg::kDefaultMoeThreshold);
}
