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

// Layout-aware text extraction over positioned glyph runs.
//
// The procedure has three steps: glyph runs on a page are grouped into lines
// and lines into contiguous blocks by coordinate proximity, blocks are
// categorized (Title, Body, Footer) by position and font size, and finally the
// non-footer blocks are merged in reading order into one text per page.
//
// Coordinates are PDF points with the origin at the bottom-left corner of the
// page, so larger y means higher on the page.

#ifndef EDUKG_LAYOUT_H_
#define EDUKG_LAYOUT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edukg/core_model.h"

namespace edukg {

struct GlyphRun {
  int page = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
  double font_size = 0.0;
  std::string text;

  double center_y() const { return 0.5 * (y0 + y1); }
};

struct GlyphDocument {
  int page_count = 0;
  double page_width = 0.0;
  double page_height = 0.0;
  std::vector<GlyphRun> glyphs;
};

struct LayoutConfig {
  // Runs share a line when their vertical centers differ by at most this
  // fraction of the larger font size.
  double line_center_tolerance = 0.4;
  // A space separates two runs when the horizontal gap exceeds this fraction
  // of the font size.
  double word_gap_factor = 0.25;
  // Consecutive lines join one block when the vertical gap is at most this
  // fraction of the page's median line height.
  double block_gap_factor = 0.8;
  double title_font_ratio = 1.2;
  // Blocks centered in this bottom fraction of the page are footers.
  double footer_zone_fraction = 0.08;
};

struct TextLine {
  int page = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
  std::string text;
  // Font size carrying the most characters; ties go to the larger size.
  double dominant_font_size = 0.0;
  std::vector<GlyphRun> runs;

  double height() const { return y1 - y0; }
};

enum class BlockCategory { kTitle, kBody, kFooter, kOther };

std::string_view BlockCategoryName(BlockCategory category);

struct TextBlock {
  int page = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
  BlockCategory category = BlockCategory::kBody;
  std::vector<std::string> lines;
  int reading_index = -1;
  double dominant_font_size = 0.0;

  double center_y() const { return 0.5 * (y0 + y1); }
  std::string text() const;
};

struct PageStats {
  double median_font_size = 0.0;
  double page_height = 0.0;
};

// Groups the runs of one page into lines, ordered top to bottom. Within a line
// runs are ordered by x0. The result does not depend on the input order.
std::vector<TextLine> GroupLines(std::span<const GlyphRun> glyphs,
                                 const LayoutConfig& config = {});

// Joins consecutive lines (sorted top to bottom) into blocks. The gap
// threshold uses the median height of `lines`.
std::vector<TextBlock> GroupBlocks(std::span<const TextLine> lines,
                                   const LayoutConfig& config = {});
std::vector<TextBlock> GroupBlocks(std::span<const TextLine> lines,
                                   double median_line_height,
                                   const LayoutConfig& config = {});

BlockCategory CategorizeBlock(const TextBlock& block, bool is_topmost,
                              const PageStats& stats,
                              const LayoutConfig& config = {});

// Median of the run font sizes; 0 for an empty page.
double MedianFontSize(std::span<const GlyphRun> glyphs);

// Blocks of one page in reading order with categories and reading indices
// assigned.
std::vector<TextBlock> AnalyzePage(std::span<const GlyphRun> glyphs,
                                   double page_height,
                                   const LayoutConfig& config = {});

// One slide per declared page, including pages without glyphs. Footer blocks
// are dropped; the title block comes first, then body blocks in reading
// order. Throws Error(kMalformedGlyph) for invalid runs.
LearningMaterial ExtractSlides(const GlyphDocument& document,
                               const LayoutConfig& config = {},
                               std::string title = "", std::string id = "");

void ValidateGlyphDocument(const GlyphDocument& document);

// Glyph-run file: UTF-8 JSON lines. The first record is the header
// {"page_count":N,"width":W,"height":H}; every following record is
// {"page":P,"x0":..,"y0":..,"x1":..,"y1":..,"size":S,"text":"..."}.
GlyphDocument ParseGlyphDocument(std::string_view content);
std::string SerializeGlyphDocument(const GlyphDocument& document);
GlyphDocument ReadGlyphFile(const std::string& path);

}  // namespace edukg

#endif  // EDUKG_LAYOUT_H_
