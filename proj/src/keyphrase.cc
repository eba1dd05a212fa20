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

#include "edukg/keyphrase.h"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "edukg/error.h"

namespace edukg {
namespace {

constexpr std::string_view kStopwords[] = {
    "a",      "about",      "above",    "after",      "again",   "against",
    "all",    "am",         "an",       "and",        "any",     "are",
    "aren",   "as",         "at",       "be",         "because", "been",
    "before", "being",      "below",    "between",    "both",    "but",
    "by",     "can",        "cannot",   "could",      "couldn",  "did",
    "didn",   "do",         "does",     "doesn",      "doing",   "don",
    "down",   "during",     "each",     "e",          "eg",      "etc",
    "few",    "for",        "from",     "further",    "had",     "hadn",
    "has",    "hasn",       "have",     "haven",      "having",  "he",
    "her",    "here",       "hers",     "herself",    "him",     "himself",
    "his",    "how",        "however",  "i",          "ie",      "if",
    "in",     "into",       "is",       "isn",        "it",      "its",
    "itself", "just",       "let",      "ll",         "may",     "me",
    "might",  "more",       "most",     "must",       "mustn",   "my",
    "myself", "no",         "nor",      "not",        "now",     "of",
    "off",    "on",         "once",     "only",       "or",      "other",
    "ought",  "our",        "ours",     "ourselves",  "out",     "over",
    "own",    "re",         "s",        "same",       "shall",   "shan",
    "she",    "should",     "shouldn",  "so",         "some",    "such",
    "t",      "than",       "that",     "the",        "their",   "theirs",
    "them",   "themselves", "then",     "there",      "these",   "they",
    "this",   "those",      "through",  "thus",       "to",      "too",
    "under",  "until",      "up",       "us",         "use",     "used",
    "using",  "ve",         "very",     "via",        "was",     "wasn",
    "we",     "were",       "weren",    "what",       "when",    "where",
    "which",  "while",      "who",      "whom",       "why",     "will",
    "with",   "won",        "would",    "wouldn",     "yet",     "you",
    "your",   "yours",      "yourself", "yourselves", "also",    "d",
    "m",      "o",          "y",        "within",     "without", "whether",
};

bool IsWordByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

// Characters that split tokens without ending a phrase.
bool IsSoftSeparator(char c) {
  return c == ' ' || c == '\t' || c == '-' || c == '\'' || c == '/' ||
         c == '_' || c == '&' || c == '+';
}

// Byte length of a UTF-8 punctuation sign at `at` (Latin-1 signs U+00A0 to
// U+00BF and the General Punctuation block), or 0.
size_t UnicodePunctuationWidth(std::string_view text, size_t at) {
  const auto byte = [&](size_t i) {
    return i < text.size() ? static_cast<unsigned char>(text[i]) : 0;
  };
  if (byte(at) == 0xC2 && byte(at + 1) >= 0xA0 && byte(at + 1) <= 0xBF) {
    return 2;
  }
  if (byte(at) == 0xE2 && (byte(at + 1) == 0x80 || byte(at + 1) == 0x81) &&
      byte(at + 2) >= 0x80 && byte(at + 2) <= 0xBF) {
    return 3;
  }
  return 0;
}

bool IsDigitOnly(std::string_view token) {
  return std::all_of(token.begin(), token.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

// Splits into phrase segments, each a list of lowercased tokens.
std::vector<std::vector<std::string>> Segments(std::string_view text) {
  std::vector<std::vector<std::string>> segments(1);
  std::string token;
  auto flush = [&]() {
    if (!token.empty()) segments.back().push_back(CaseFold(token));
    token.clear();
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (const size_t width = UnicodePunctuationWidth(text, i); width > 0) {
      flush();
      if (!segments.back().empty()) segments.emplace_back();
      i += width - 1;
    } else if (IsWordByte(static_cast<unsigned char>(c))) {
      token += c;
    } else if (IsSoftSeparator(c)) {
      flush();
    } else {
      flush();
      if (!segments.back().empty()) segments.emplace_back();
    }
  }
  flush();
  if (segments.back().empty()) segments.pop_back();
  return segments;
}

}  // namespace

int KeyphraseBudget(int num_slides, PipelineMode mode, int per_slide_budget,
                    int material_budget_factor) {
  if (num_slides < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "keyphrase budget needs at least one slide");
  }
  return mode == PipelineMode::kTopDown ? material_budget_factor * num_slides
                                        : per_slide_budget;
}

bool IsStopword(std::string_view token) {
  static const std::unordered_set<std::string_view> kSet(std::begin(kStopwords),
                                                         std::end(kStopwords));
  return kSet.contains(token);
}

std::vector<CandidatePhrase> GenerateCandidates(
    std::string_view text, const CandidateOptions& options) {
  std::vector<CandidatePhrase> out;
  std::set<std::string> seen;
  int offset = 0;
  for (const auto& tokens : Segments(text)) {
    const int n = static_cast<int>(tokens.size());
    for (int start = 0; start < n; ++start) {
      if (IsStopword(tokens[start]) || IsDigitOnly(tokens[start])) continue;
      std::string surface;
      for (int len = 1; len <= options.max_ngram && start + len <= n; ++len) {
        const std::string& last = tokens[start + len - 1];
        if (IsDigitOnly(last)) break;
        if (len > 1) surface += ' ';
        surface += last;
        if (IsStopword(last)) continue;
        if (seen.insert(surface).second) {
          out.push_back(CandidatePhrase{surface, offset + start,
                                        offset + start + len, 0.0});
        }
      }
    }
    offset += n;
  }
  return out;
}

std::vector<Keyphrase> EmbeddingRanker::Rank(std::string_view text, int budget,
                                             std::optional<int> origin_slide) {
  if (budget < 1) {
    throw Error(ErrorCode::kInvalidArgument, "keyphrase budget must be >= 1");
  }
  std::vector<CandidatePhrase> candidates = GenerateCandidates(text, options_);
  if (candidates.empty()) return {};

  std::vector<std::string> texts;
  texts.reserve(candidates.size() + 1);
  texts.emplace_back(text);
  for (const CandidatePhrase& c : candidates) texts.push_back(c.surface);
  const std::vector<EmbeddingVector> vectors = EmbedTexts(embedder_, texts);
  for (size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].score = Cosine(vectors[i + 1], vectors[0]);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const CandidatePhrase& a, const CandidatePhrase& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.token_length() != b.token_length()) {
                return a.token_length() > b.token_length();
              }
              return a.surface < b.surface;
            });
  if (candidates.size() > static_cast<size_t>(budget)) {
    candidates.resize(static_cast<size_t>(budget));
  }
  std::vector<Keyphrase> out;
  out.reserve(candidates.size());
  for (CandidatePhrase& c : candidates) {
    out.push_back(Keyphrase{std::move(c.surface), c.score, origin_slide});
  }
  return out;
}

std::vector<Keyphrase> RankKeyphrases(std::string_view text, int budget,
                                      EmbeddingProvider& embedder) {
  EmbeddingRanker ranker(embedder);
  return ranker.Rank(text, budget, std::nullopt);
}

}  // namespace edukg
