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

// edukg: batch construction, export, evaluation and the review server.
//
// Exit codes: 0 success, 1 usage, 2 input error, 3 external-service failure.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edukg/app.h"
#include "edukg/error.h"
#include "edukg/evaluation.h"
#include "edukg/graph.h"
#include "edukg/hitl.h"
#include "edukg/hitl_http.h"
#include "edukg/layout.h"
#include "edukg/pipelines.h"

namespace {

using edukg::Error;
using edukg::ErrorCode;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInputError = 2;
constexpr int kServiceFailure = 3;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

bool IsServiceError(ErrorCode code) {
  return code == ErrorCode::kServiceUnavailable ||
         code == ErrorCode::kMalformedResponse ||
         code == ErrorCode::kEmbeddingUnavailable;
}

edukg::AppConfig Config(const std::string& path) {
  edukg::AppConfig config = edukg::LoadAppConfig(path);
  edukg::ApplyEnvironment(config,
                          [](const char* name) { return std::getenv(name); });
  return config;
}

struct BuildArgs {
  std::string mode;
  std::string input;
  std::string out;
  std::string config;
  std::string report;
  std::string title;
  std::string id;
};

int Build(const BuildArgs& args) {
  edukg::AppConfig config = Config(args.config);
  if (!args.mode.empty()) {
    config.pipeline.mode = edukg::ParsePipelineMode(args.mode);
  }
  const edukg::GlyphDocument document = edukg::ReadGlyphFile(args.input);
  // "deck.glyphs.jsonl" -> "deck".
  std::string stem = std::filesystem::path(args.input).filename().string();
  stem = stem.substr(0, stem.find('.'));
  const std::string title = args.title.empty() ? stem : args.title;
  const edukg::LearningMaterial material = edukg::ExtractSlides(
      document, {}, title, args.id.empty() ? stem : args.id);

  edukg::ServiceBundle bundle(config);
  const edukg::PipelineResult result =
      edukg::RunPipeline(material, bundle.services(), config.pipeline);
  WriteFile(args.out, edukg::SerializeGraph(result.graph));
  const std::string report_path =
      args.report.empty() ? args.out + ".report.json" : args.report;
  WriteFile(report_path, result.report.ToJson());
  for (const std::string& warning : result.report.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  std::cout << "nodes " << result.graph.node_count() << ", edges "
            << result.graph.edge_count() << ", main concepts "
            << result.report.main_concepts << "\n";
  // Every failure was absorbed but nothing could be linked: the services, not
  // the input, are the problem.
  if (result.report.main_concepts == 0 && !result.report.warnings.empty()) {
    std::cerr << "error: no concepts linked; external services failed\n";
    return kServiceFailure;
  }
  return kOk;
}

int ExportCypher(const std::string& graph_path, const std::string& out) {
  const edukg::EduKG graph = edukg::ParseGraph(ReadFile(graph_path));
  WriteFile(out, edukg::ExportCypher(graph));
  return kOk;
}

int EvalMetrics(const std::string& judgments_path, int k, bool as_json) {
  const std::vector<edukg::JudgedRanking> rankings =
      edukg::ParseJudgedRankings(ReadFile(judgments_path));
  if (rankings.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no judged rankings");
  }
  double precision = 0.0;
  for (const auto& ranking : rankings) {
    precision += edukg::PrecisionAtK(ranking, k);
  }
  precision /= static_cast<double>(rankings.size());
  const double mrr = edukg::MeanReciprocalRank(rankings);
  const double map = edukg::MeanAveragePrecision(rankings, k);
  if (as_json) {
    std::printf(
        "{\"rankings\": %zu, \"k\": %d, \"precision_at_k\": %.17g, "
        "\"mrr\": %.17g, \"map\": %.17g}\n",
        rankings.size(), k, precision, mrr, map);
  } else {
    std::printf("rankings: %zu\nP@%d: %.3f\nMRR: %.3f\nMAP@%d: %.3f\n",
                rankings.size(), k, precision, mrr, k, map);
  }
  return kOk;
}

struct SrsArgs {
  std::string graph;
  std::string session;
  double z = edukg::kDefaultZ;
  double moe = edukg::kDefaultMoeThreshold;
  int sample = -1;
  uint64_t seed = 0;
  std::string out;
  bool json = false;
};

int EvalSrs(const SrsArgs& args) {
  if (args.sample >= 0) {
    if (args.graph.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--sample needs --graph");
    }
    const edukg::EduKG graph = edukg::ParseGraph(ReadFile(args.graph));
    std::string lines;
    for (const std::string& triple :
         edukg::SampleTriples(graph, args.sample, args.seed)) {
      lines += triple + "\n";
    }
    if (args.out.empty()) {
      std::cout << lines;
    } else {
      WriteFile(args.out, lines);
    }
    return kOk;
  }
  if (args.session.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--session is required");
  }
  const edukg::SrsSession session =
      edukg::ParseSession(ReadFile(args.session), args.z, args.moe);
  if (!args.graph.empty()) {
    const edukg::EduKG graph = edukg::ParseGraph(ReadFile(args.graph));
    const std::vector<std::string> population = edukg::TriplePopulation(graph);
    const std::set<std::string> known(population.begin(), population.end());
    for (const edukg::Judgment& j : session.judgments()) {
      if (!known.contains(j.triple_id)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "judged triple " + j.triple_id + " is not in the graph");
      }
    }
  }
  const edukg::SrsEstimate estimate = edukg::EstimateAccuracy(session);
  if (args.json) {
    std::cout << edukg::EstimateToJson(estimate);
  } else {
    std::printf(
        "accuracy: %s\nn: %d\ninterval: [%.4f, %.4f]\n"
        "moe: %.4f\nstop: %s\n",
        edukg::FormatEstimate(estimate).c_str(), estimate.n,
        estimate.mu - estimate.half_width, estimate.mu + estimate.half_width,
        estimate.moe, estimate.stop ? "true" : "false");
  }
  return kOk;
}

edukg::HitlHttpServer* g_server = nullptr;

void OnSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

int Serve(const std::string& addr, const std::string& config_path) {
  const size_t colon = addr.rfind(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "--addr must be host:port");
  }
  const std::string host = addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad port in " + addr);
  }
  const edukg::AppConfig config = Config(config_path);
  edukg::ServiceBundle bundle(config);
  edukg::HitlService service(bundle.services(), config.pipeline);
  edukg::HitlHttpServer server(service);
  if (port == 0) {
    port = server.BindToAnyPort(host);
    if (port < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
  } else if (!server.Bind(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + addr);
  }
  g_server = &server;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::cout << "listening on " << host << ":" << port << std::endl;
  server.ListenAfterBind();
  g_server = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Educational knowledge graph construction and evaluation"};
  app.require_subcommand(1);

  BuildArgs build;
  CLI::App* build_cmd =
      app.add_subcommand("build", "Build a graph from slides");
  build_cmd->add_option("--mode", build.mode, "top-down or bottom-up")
      ->check(CLI::IsMember({"top-down", "bottom-up"}));
  build_cmd->add_option("--input", build.input, "Glyph document")->required();
  build_cmd->add_option("--out", build.out, "Graph document")->required();
  build_cmd->add_option("--config", build.config, "JSON config file");
  build_cmd->add_option("--report", build.report,
                        "Run report (default <out>.report.json)");
  build_cmd->add_option("--title", build.title, "Material title");
  build_cmd->add_option("--id", build.id, "Material id");

  std::string cypher_graph;
  std::string cypher_out;
  CLI::App* cypher_cmd =
      app.add_subcommand("export-cypher", "Write a Cypher statement script");
  cypher_cmd->add_option("--graph", cypher_graph)->required();
  cypher_cmd->add_option("--out", cypher_out)->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluation reports");
  eval_cmd->require_subcommand(1);
  std::string judgments;
  int k = 15;
  bool metrics_json = false;
  CLI::App* metrics_cmd =
      eval_cmd->add_subcommand("metrics", "P@k, MRR and MAP");
  metrics_cmd->add_option("--judgments", judgments)->required();
  metrics_cmd->add_option("--k", k)->check(CLI::PositiveNumber);
  metrics_cmd->add_flag("--json", metrics_json);

  SrsArgs srs;
  CLI::App* srs_cmd =
      eval_cmd->add_subcommand("srs", "Simple random sampling accuracy");
  srs_cmd->add_option("--graph", srs.graph);
  srs_cmd->add_option("--session", srs.session);
  srs_cmd->add_option("--z", srs.z)->check(CLI::PositiveNumber);
  srs_cmd->add_option("--moe", srs.moe)->check(CLI::PositiveNumber);
  srs_cmd->add_option("--sample", srs.sample)->check(CLI::NonNegativeNumber);
  srs_cmd->add_option("--seed", srs.seed);
  srs_cmd->add_option("--out", srs.out, "Write sampled triples here");
  srs_cmd->add_flag("--json", srs.json);

  std::string addr = "127.0.0.1:8080";
  std::string serve_config;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the review service");
  serve_cmd->add_option("--addr", addr, "host:port");
  serve_cmd->add_option("--config", serve_config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build_cmd) return Build(build);
    if (*cypher_cmd) return ExportCypher(cypher_graph, cypher_out);
    if (*metrics_cmd) return EvalMetrics(judgments, k, metrics_json);
    if (*srs_cmd) return EvalSrs(srs);
    if (*serve_cmd) return Serve(addr, serve_config);
  } catch (const Error& e) {
    std::cerr << "error: " << edukg::ErrorCodeName(e.code()) << ": " << e.what()
              << "\n";
    return IsServiceError(e.code()) ? kServiceFailure : kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kUsage;
}
