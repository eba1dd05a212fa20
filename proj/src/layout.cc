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

#include "edukg/layout.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "edukg/error.h"
#include "json.hpp"

namespace edukg {
namespace {

using nlohmann::json;

// Total order over runs so that grouping is independent of input order.
bool RunBefore(const GlyphRun& a, const GlyphRun& b) {
  const double ca = a.center_y();
  const double cb = b.center_y();
  if (ca != cb) return ca > cb;
  return std::tie(a.x0, a.x1, a.y0, a.y1, a.font_size, a.text) <
         std::tie(b.x0, b.x1, b.y0, b.y1, b.font_size, b.text);
}

bool RunLeftOf(const GlyphRun& a, const GlyphRun& b) {
  return std::tie(a.x0, a.x1, a.y1, a.y0, a.font_size, a.text) <
         std::tie(b.x0, b.x1, b.y1, b.y0, b.font_size, b.text);
}

size_t CharCount(std::string_view text) {
  size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

double DominantFont(const std::map<double, size_t>& chars_by_font) {
  double best = 0.0;
  size_t best_count = 0;
  for (const auto& [size, count] : chars_by_font) {
    if (count >= best_count) {
      best = size;
      best_count = count;
    }
  }
  return best;
}

TextLine BuildLine(std::vector<GlyphRun> runs, const LayoutConfig& config) {
  std::sort(runs.begin(), runs.end(), RunLeftOf);
  TextLine line;
  line.page = runs.front().page;
  line.x0 = runs.front().x0;
  line.y0 = runs.front().y0;
  line.x1 = runs.front().x1;
  line.y1 = runs.front().y1;
  std::map<double, size_t> chars_by_font;
  for (size_t i = 0; i < runs.size(); ++i) {
    const GlyphRun& run = runs[i];
    if (i > 0) {
      const GlyphRun& prev = runs[i - 1];
      const double gap = run.x0 - prev.x1;
      const double font = std::max(run.font_size, prev.font_size);
      if (gap > config.word_gap_factor * font) line.text += ' ';
    }
    line.text += run.text;
    line.x0 = std::min(line.x0, run.x0);
    line.y0 = std::min(line.y0, run.y0);
    line.x1 = std::max(line.x1, run.x1);
    line.y1 = std::max(line.y1, run.y1);
    chars_by_font[run.font_size] += CharCount(run.text);
  }
  line.dominant_font_size = DominantFont(chars_by_font);
  line.runs = std::move(runs);
  return line;
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

bool BlockBefore(const TextBlock& a, const TextBlock& b) {
  if (a.y1 != b.y1) return a.y1 > b.y1;
  if (a.x0 != b.x0) return a.x0 < b.x0;
  return a.lines < b.lines;
}

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedGlyph, what);
}

double RequireNumber(const json& record, const char* key, size_t line_no) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_number()) {
    Malformed("line " + std::to_string(line_no) + ": missing numeric field '" +
              key + "'");
  }
  return it->get<double>();
}

}  // namespace

std::string_view BlockCategoryName(BlockCategory category) {
  switch (category) {
    case BlockCategory::kTitle:
      return "Title";
    case BlockCategory::kBody:
      return "Body";
    case BlockCategory::kFooter:
      return "Footer";
    case BlockCategory::kOther:
      return "Other";
  }
  return "Other";
}

std::string TextBlock::text() const {
  std::string out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += '\n';
    out += lines[i];
  }
  return out;
}

std::vector<TextLine> GroupLines(std::span<const GlyphRun> glyphs,
                                 const LayoutConfig& config) {
  std::vector<GlyphRun> sorted;
  sorted.reserve(glyphs.size());
  for (const GlyphRun& run : glyphs) {
    if (!run.text.empty()) sorted.push_back(run);
  }
  std::sort(sorted.begin(), sorted.end(), RunBefore);

  std::vector<TextLine> lines;
  std::vector<GlyphRun> current;
  double anchor_center = 0.0;
  double anchor_font = 0.0;
  for (GlyphRun& run : sorted) {
    if (!current.empty()) {
      const double font = std::max(anchor_font, run.font_size);
      if (std::abs(anchor_center - run.center_y()) <=
          config.line_center_tolerance * font) {
        anchor_font = font;
        current.push_back(std::move(run));
        continue;
      }
      lines.push_back(BuildLine(std::move(current), config));
      current.clear();
    }
    anchor_center = run.center_y();
    anchor_font = run.font_size;
    current.push_back(std::move(run));
  }
  if (!current.empty()) lines.push_back(BuildLine(std::move(current), config));
  return lines;
}

std::vector<TextBlock> GroupBlocks(std::span<const TextLine> lines,
                                   const LayoutConfig& config) {
  std::vector<double> heights;
  heights.reserve(lines.size());
  for (const TextLine& line : lines) heights.push_back(line.height());
  return GroupBlocks(lines, Median(std::move(heights)), config);
}

std::vector<TextBlock> GroupBlocks(std::span<const TextLine> lines,
                                   double median_line_height,
                                   const LayoutConfig& config) {
  std::vector<TextBlock> blocks;
  const double max_gap = config.block_gap_factor * median_line_height;
  std::map<double, size_t> chars_by_font;
  auto close_block = [&]() {
    if (blocks.empty()) return;
    blocks.back().dominant_font_size = DominantFont(chars_by_font);
    chars_by_font.clear();
  };
  const TextLine* prev = nullptr;
  for (const TextLine& line : lines) {
    const bool join = prev != nullptr && (prev->y0 - line.y1) <= max_gap;
    if (!join) {
      close_block();
      TextBlock block;
      block.page = line.page;
      block.x0 = line.x0;
      block.y0 = line.y0;
      block.x1 = line.x1;
      block.y1 = line.y1;
      blocks.push_back(std::move(block));
    }
    TextBlock& block = blocks.back();
    block.lines.push_back(line.text);
    block.x0 = std::min(block.x0, line.x0);
    block.y0 = std::min(block.y0, line.y0);
    block.x1 = std::max(block.x1, line.x1);
    block.y1 = std::max(block.y1, line.y1);
    for (const GlyphRun& run : line.runs) {
      chars_by_font[run.font_size] += CharCount(run.text);
    }
    if (line.runs.empty()) {
      chars_by_font[line.dominant_font_size] += CharCount(line.text);
    }
    prev = &line;
  }
  close_block();
  return blocks;
}

BlockCategory CategorizeBlock(const TextBlock& block, bool is_topmost,
                              const PageStats& stats,
                              const LayoutConfig& config) {
  if (Trim(block.text()).empty()) return BlockCategory::kOther;
  if (is_topmost && block.dominant_font_size >=
                        config.title_font_ratio * stats.median_font_size) {
    return BlockCategory::kTitle;
  }
  if (block.center_y() < config.footer_zone_fraction * stats.page_height) {
    return BlockCategory::kFooter;
  }
  return BlockCategory::kBody;
}

double MedianFontSize(std::span<const GlyphRun> glyphs) {
  std::vector<double> sizes;
  sizes.reserve(glyphs.size());
  for (const GlyphRun& run : glyphs) {
    if (!run.text.empty()) sizes.push_back(run.font_size);
  }
  return Median(std::move(sizes));
}

std::vector<TextBlock> AnalyzePage(std::span<const GlyphRun> glyphs,
                                   double page_height,
                                   const LayoutConfig& config) {
  const std::vector<TextLine> lines = GroupLines(glyphs, config);
  std::vector<TextBlock> blocks = GroupBlocks(lines, config);
  std::sort(blocks.begin(), blocks.end(), BlockBefore);
  const PageStats stats{MedianFontSize(glyphs), page_height};
  for (size_t i = 0; i < blocks.size(); ++i) {
    blocks[i].reading_index = static_cast<int>(i);
    blocks[i].category = CategorizeBlock(blocks[i], i == 0, stats, config);
  }
  return blocks;
}

void ValidateGlyphDocument(const GlyphDocument& document) {
  if (document.page_count < 0) Malformed("negative page count");
  if (!std::isfinite(document.page_width) ||
      !std::isfinite(document.page_height) || document.page_height < 0.0 ||
      document.page_width < 0.0) {
    Malformed("invalid page dimensions");
  }
  for (size_t i = 0; i < document.glyphs.size(); ++i) {
    const GlyphRun& run = document.glyphs[i];
    const std::string where = "glyph " + std::to_string(i) + ": ";
    for (double v : {run.x0, run.y0, run.x1, run.y1, run.font_size}) {
      if (!std::isfinite(v)) Malformed(where + "non-finite coordinate");
    }
    if (run.x0 > run.x1 || run.y0 > run.y1) {
      Malformed(where + "inverted bounding box");
    }
    if (run.font_size <= 0.0) Malformed(where + "font size must be positive");
    if (run.page < 0 || run.page >= document.page_count) {
      Malformed(where + "page " + std::to_string(run.page) +
                " outside declared page count");
    }
  }
}

LearningMaterial ExtractSlides(const GlyphDocument& document,
                               const LayoutConfig& config, std::string title,
                               std::string id) {
  ValidateGlyphDocument(document);
  std::vector<std::vector<GlyphRun>> pages(document.page_count);
  for (const GlyphRun& run : document.glyphs) pages[run.page].push_back(run);

  std::vector<std::string> texts;
  texts.reserve(pages.size());
  for (const auto& page : pages) {
    const std::vector<TextBlock> blocks =
        AnalyzePage(page, document.page_height, config);
    std::vector<const TextBlock*> ordered;
    for (const TextBlock& block : blocks) {
      if (block.category == BlockCategory::kTitle) ordered.push_back(&block);
    }
    for (const TextBlock& block : blocks) {
      if (block.category == BlockCategory::kBody) ordered.push_back(&block);
    }
    std::string text;
    for (size_t i = 0; i < ordered.size(); ++i) {
      if (i > 0) text += '\n';
      text += ordered[i]->text();
    }
    texts.push_back(std::move(text));
  }
  if (id.empty()) id = title;
  return AssembleMaterial(texts, std::move(title), std::move(id));
}

GlyphDocument ParseGlyphDocument(std::string_view content) {
  GlyphDocument document;
  bool have_header = false;
  size_t line_no = 0;
  size_t start = 0;
  while (start < content.size()) {
    size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = Trim(content.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      Malformed("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!record.is_object()) {
      Malformed("line " + std::to_string(line_no) + ": expected an object");
    }
    if (!have_header) {
      if (!record.contains("page_count")) {
        Malformed("first record must be the page_count header");
      }
      const double pages = RequireNumber(record, "page_count", line_no);
      document.page_count = static_cast<int>(pages);
      document.page_width = RequireNumber(record, "width", line_no);
      document.page_height = RequireNumber(record, "height", line_no);
      have_header = true;
      continue;
    }
    GlyphRun run;
    run.page = static_cast<int>(RequireNumber(record, "page", line_no));
    run.x0 = RequireNumber(record, "x0", line_no);
    run.y0 = RequireNumber(record, "y0", line_no);
    run.x1 = RequireNumber(record, "x1", line_no);
    run.y1 = RequireNumber(record, "y1", line_no);
    run.font_size = RequireNumber(record, "size", line_no);
    auto text = record.find("text");
    if (text == record.end() || !text->is_string()) {
      Malformed("line " + std::to_string(line_no) + ": missing text");
    }
    run.text = text->get<std::string>();
    document.glyphs.push_back(std::move(run));
  }
  if (!have_header) Malformed("missing header record");
  ValidateGlyphDocument(document);
  return document;
}

std::string SerializeGlyphDocument(const GlyphDocument& document) {
  std::ostringstream out;
  json header = json::object();
  header["page_count"] = document.page_count;
  header["width"] = document.page_width;
  header["height"] = document.page_height;
  // nlohmann orders object keys alphabetically; emit the documented order.
  out << "{\"page_count\":" << header["page_count"].dump()
      << ",\"width\":" << header["width"].dump()
      << ",\"height\":" << header["height"].dump() << "}\n";
  for (const GlyphRun& run : document.glyphs) {
    out << "{\"page\":" << run.page << ",\"x0\":" << json(run.x0).dump()
        << ",\"y0\":" << json(run.y0).dump()
        << ",\"x1\":" << json(run.x1).dump()
        << ",\"y1\":" << json(run.y1).dump()
        << ",\"size\":" << json(run.font_size).dump()
        << ",\"text\":" << json(run.text).dump() << "}\n";
  }
  return out.str();
}

GlyphDocument ReadGlyphFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open glyph file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseGlyphDocument(buffer.str());
}

}  // namespace edukg
