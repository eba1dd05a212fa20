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

#include "edukg/embedding.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "edukg/core_model.h"
#include "edukg/error.h"
#include "json.hpp"

namespace edukg {
namespace {

uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void Normalize(std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  if (sum == 0.0) return;
  const double norm = std::sqrt(sum);
  for (double& v : values) v /= norm;
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::vector<std::string_view> WhitespaceTokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    const size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

double EmbeddingVector::Norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

bool EmbeddingVector::IsZero() const {
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

double Cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine over dimensions " + std::to_string(a.dimension()) +
                    " and " + std::to_string(b.dimension()));
  }
  double dot = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    aa += a.values[i] * a.values[i];
    bb += b.values[i] * b.values[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  // The product form keeps cosine(a, b) == cosine(b, a) bit for bit.
  const double result = dot / (std::sqrt(aa) * std::sqrt(bb));
  return std::clamp(result, -1.0, 1.0);
}

EmbeddingVector HashEmbedder::TokenVector(std::string_view token) {
  uint64_t state = Fnv1a64(token) ^ kSeed;
  std::vector<double> values(kDimension);
  for (double& v : values) {
    v = static_cast<double>(static_cast<int64_t>(SplitMix64(state))) /
        9223372036854775808.0;
  }
  Normalize(values);
  return EmbeddingVector{std::move(values)};
}

EmbeddingVector HashEmbedder::EmbedOne(std::string_view text) {
  const std::string folded = CaseFold(text);
  std::vector<double> sum(kDimension, 0.0);
  const auto tokens = WhitespaceTokens(folded);
  for (std::string_view token : tokens) {
    const EmbeddingVector v = TokenVector(token);
    for (size_t i = 0; i < kDimension; ++i) sum[i] += v.values[i];
  }
  if (!tokens.empty()) {
    for (double& v : sum) v /= static_cast<double>(tokens.size());
  }
  Normalize(sum);
  return EmbeddingVector{std::move(sum)};
}

std::vector<EmbeddingVector> HashEmbedder::Embed(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) out.push_back(EmbedOne(text));
  return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(Transport& transport,
                                             HttpEmbeddingOptions options)
    : transport_(transport), options_(std::move(options)) {}

std::vector<EmbeddingVector> HttpEmbeddingProvider::Embed(
    std::span<const std::string> texts) {
  if (texts.empty()) {
    throw Error(ErrorCode::kEmbeddingUnavailable,
                "embedding request needs at least one text");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  const size_t batch = std::max<size_t>(1, options_.max_batch);
  for (size_t start = 0; start < texts.size(); start += batch) {
    const size_t n = std::min(batch, texts.size() - start);
    auto part = EmbedBatch(texts.subspan(start, n));
    for (auto& v : part) out.push_back(std::move(v));
  }
  return out;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::EmbedBatch(
    std::span<const std::string> texts) {
  using nlohmann::json;
  HttpRequest request;
  request.method = "POST";
  request.url = options_.endpoint;
  request.content_type = "application/json";
  request.accept = "application/json";
  request.body =
      json{{"model", options_.model},
           {"texts", std::vector<std::string>(texts.begin(), texts.end())}}
          .dump();
  HttpResponse response;
  try {
    response = SendWithRetry(transport_, request, options_.retry);
  } catch (const Error& e) {
    throw Error(ErrorCode::kEmbeddingUnavailable, e.what());
  }
  if (response.status != 200) {
    throw Error(
        ErrorCode::kEmbeddingUnavailable,
        "embedding service returned HTTP " + std::to_string(response.status));
  }
  json doc = json::parse(response.body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.contains("vectors") ||
      !doc["vectors"].is_array() || doc["vectors"].size() != texts.size()) {
    throw Error(ErrorCode::kEmbeddingUnavailable,
                "embedding response must hold one vector per text");
  }
  std::vector<EmbeddingVector> out;
  for (const json& row : doc["vectors"]) {
    EmbeddingVector v;
    if (!row.is_array() || row.size() != options_.dimension) {
      throw Error(ErrorCode::kEmbeddingUnavailable,
                  "embedding vector has unexpected dimension");
    }
    for (const json& x : row) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        throw Error(ErrorCode::kEmbeddingUnavailable,
                    "embedding vector has a non-finite component");
      }
      v.values.push_back(x.get<double>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<EmbeddingVector> CachingEmbedder::Embed(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out(texts.size());
  std::vector<std::string> missing;
  std::vector<size_t> missing_index;
  {
    std::shared_lock lock(mu_);
    for (size_t i = 0; i < texts.size(); ++i) {
      auto it = memo_.find(texts[i]);
      if (it != memo_.end()) {
        out[i] = it->second;
      } else {
        missing.push_back(texts[i]);
        missing_index.push_back(i);
      }
    }
  }
  if (missing.empty()) return out;
  std::vector<EmbeddingVector> fresh = inner_.Embed(missing);
  std::unique_lock lock(mu_);
  for (size_t j = 0; j < fresh.size(); ++j) {
    memo_.emplace(missing[j], fresh[j]);
    out[missing_index[j]] = std::move(fresh[j]);
  }
  return out;
}

std::vector<std::string> ChunkText(std::string_view text, int max_tokens) {
  const auto tokens = WhitespaceTokens(text);
  std::vector<std::string> chunks;
  const size_t per_chunk = static_cast<size_t>(std::max(1, max_tokens));
  for (size_t start = 0; start < tokens.size(); start += per_chunk) {
    std::string chunk;
    const size_t end = std::min(tokens.size(), start + per_chunk);
    for (size_t i = start; i < end; ++i) {
      if (i > start) chunk += ' ';
      chunk += tokens[i];
    }
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

std::vector<EmbeddingVector> EmbedTexts(EmbeddingProvider& provider,
                                        std::span<const std::string> texts) {
  std::vector<std::string> chunks;
  std::vector<std::pair<size_t, size_t>> ranges;
  for (const std::string& text : texts) {
    auto parts = ChunkText(text);
    ranges.emplace_back(chunks.size(), parts.size());
    for (auto& part : parts) chunks.push_back(std::move(part));
  }
  std::vector<EmbeddingVector> chunk_vectors;
  if (!chunks.empty()) {
    chunk_vectors = provider.Embed(chunks);
    if (chunk_vectors.size() != chunks.size()) {
      throw Error(ErrorCode::kEmbeddingUnavailable,
                  "provider returned a wrong number of vectors");
    }
  }
  const size_t dim = provider.dimension();
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& [first, count] : ranges) {
    if (count == 0) {
      out.push_back(EmbeddingVector{std::vector<double>(dim, 0.0)});
    } else if (count == 1) {
      out.push_back(chunk_vectors[first]);
    } else {
      std::vector<double> mean(dim, 0.0);
      for (size_t c = first; c < first + count; ++c) {
        if (chunk_vectors[c].dimension() != dim) {
          throw Error(ErrorCode::kDimensionMismatch,
                      "chunk vector dimension differs from provider");
        }
        for (size_t i = 0; i < dim; ++i) mean[i] += chunk_vectors[c].values[i];
      }
      for (double& v : mean) v /= static_cast<double>(count);
      Normalize(mean);
      out.push_back(EmbeddingVector{std::move(mean)});
    }
  }
  return out;
}

EmbeddingVector EmbedText(EmbeddingProvider& provider, std::string_view text) {
  const std::string owned(text);
  return EmbedTexts(provider, std::span<const std::string>(&owned, 1)).front();
}

}  // namespace edukg
