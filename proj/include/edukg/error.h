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

#ifndef EDUKG_ERROR_H_
#define EDUKG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace edukg {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kEmptyMaterial,
  kMalformedGlyph,
  kEmptyText,
  kServiceUnavailable,
  kMalformedResponse,
  kEmbeddingUnavailable,
  kDimensionMismatch,
  kUnknownMaterial,
  kUnknownSlide,
  kUnpublishedMaterial,
  kKOutOfRange,
  kEmptySession,
  kSampleTooLarge,
  kUnknownDraft,
  kNotReady,
  kVersionConflict,
  kUnknownConcept,
  kDraftImmutable,
  kUnresolvable,
  kBadSlideIndex,
  kConflictActiveDraft,
  kPipelineFailed,
};

// Stable machine-readable name, e.g. "VersionConflict".
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace edukg

#endif  // EDUKG_ERROR_H_
