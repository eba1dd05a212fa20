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

// Text-embedding provider contract and the two bundled providers.

#ifndef EDUKG_EMBEDDING_H_
#define EDUKG_EMBEDDING_H_

#include <map>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edukg/transport.h"

namespace edukg {

struct EmbeddingVector {
  std::vector<double> values;

  size_t dimension() const { return values.size(); }
  double Norm() const;
  bool IsZero() const;
  bool operator==(const EmbeddingVector&) const = default;
};

// Cosine similarity in [-1, 1]. Returns 0 when either vector has zero norm.
// Throws Error(kDimensionMismatch) for vectors of different dimension.
double Cosine(const EmbeddingVector& a, const EmbeddingVector& b);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual size_t dimension() const = 0;
  // Returns exactly one vector per input text. Throws
  // Error(kEmbeddingUnavailable) when the provider cannot answer.
  virtual std::vector<EmbeddingVector> Embed(
      std::span<const std::string> texts) = 0;
};

// Deterministic 64-dimensional embedder used as the test oracle. Every
// whitespace token of the case-folded text maps to a unit vector expanded
// from a seeded 64-bit hash of the token; the text vector is the normalized
// mean of its token vectors and the empty text maps to the zero vector.
class HashEmbedder : public EmbeddingProvider {
 public:
  static constexpr size_t kDimension = 64;
  static constexpr uint64_t kSeed = 0x9E3779B97F4A7C15ULL;

  size_t dimension() const override { return kDimension; }
  std::vector<EmbeddingVector> Embed(
      std::span<const std::string> texts) override;

  static EmbeddingVector TokenVector(std::string_view token);
  static EmbeddingVector EmbedOne(std::string_view text);
};

struct HttpEmbeddingOptions {
  // POST {"model": ..., "texts": [...]} -> {"vectors": [[...]]}.
  std::string endpoint = "http://localhost:8080/embed";
  std::string model = "all-MiniLM-L6-v2";
  size_t dimension = 384;
  size_t max_batch = 64;
  RetryPolicy retry;
};

class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(Transport& transport, HttpEmbeddingOptions options);
  size_t dimension() const override { return options_.dimension; }
  std::vector<EmbeddingVector> Embed(
      std::span<const std::string> texts) override;

 private:
  std::vector<EmbeddingVector> EmbedBatch(std::span<const std::string> texts);

  Transport& transport_;
  HttpEmbeddingOptions options_;
};

// Memoizes another provider by exact text.
class CachingEmbedder : public EmbeddingProvider {
 public:
  explicit CachingEmbedder(EmbeddingProvider& inner) : inner_(inner) {}
  size_t dimension() const override { return inner_.dimension(); }
  std::vector<EmbeddingVector> Embed(
      std::span<const std::string> texts) override;

 private:
  EmbeddingProvider& inner_;
  mutable std::shared_mutex mu_;
  std::map<std::string, EmbeddingVector> memo_;
};

inline constexpr int kMaxChunkTokens = 512;

// Splits on whitespace into chunks of at most `max_tokens` tokens, each
// re-joined with single spaces. Empty or blank text yields no chunks.
std::vector<std::string> ChunkText(std::string_view text,
                                   int max_tokens = kMaxChunkTokens);

// Embeds arbitrarily long texts: each text is chunked, chunks are embedded in
// one provider call and a multi-chunk text gets the normalized mean of its
// chunk vectors. Blank text yields the zero vector.
std::vector<EmbeddingVector> EmbedTexts(EmbeddingProvider& provider,
                                        std::span<const std::string> texts);
EmbeddingVector EmbedText(EmbeddingProvider& provider, std::string_view text);

}  // namespace edukg

#endif  // EDUKG_EMBEDDING_H_
