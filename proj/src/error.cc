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

#include "edukg/error.h"

namespace edukg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kIo:
      return "Io";
    case ErrorCode::kEmptyMaterial:
      return "EmptyMaterial";
    case ErrorCode::kMalformedGlyph:
      return "MalformedGlyph";
    case ErrorCode::kEmptyText:
      return "EmptyText";
    case ErrorCode::kServiceUnavailable:
      return "ServiceUnavailable";
    case ErrorCode::kMalformedResponse:
      return "MalformedResponse";
    case ErrorCode::kEmbeddingUnavailable:
      return "EmbeddingUnavailable";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kUnknownMaterial:
      return "UnknownMaterial";
    case ErrorCode::kUnknownSlide:
      return "UnknownSlide";
    case ErrorCode::kUnpublishedMaterial:
      return "UnpublishedMaterial";
    case ErrorCode::kKOutOfRange:
      return "KOutOfRange";
    case ErrorCode::kEmptySession:
      return "EmptySession";
    case ErrorCode::kSampleTooLarge:
      return "SampleTooLarge";
    case ErrorCode::kUnknownDraft:
      return "UnknownDraft";
    case ErrorCode::kNotReady:
      return "NotReady";
    case ErrorCode::kVersionConflict:
      return "VersionConflict";
    case ErrorCode::kUnknownConcept:
      return "UnknownConcept";
    case ErrorCode::kDraftImmutable:
      return "DraftImmutable";
    case ErrorCode::kUnresolvable:
      return "Unresolvable";
    case ErrorCode::kBadSlideIndex:
      return "BadSlideIndex";
    case ErrorCode::kConflictActiveDraft:
      return "ConflictActiveDraft";
    case ErrorCode::kPipelineFailed:
      return "PipelineFailed";
  }
  return "Unknown";
}

}  // namespace edukg
