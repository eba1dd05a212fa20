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

#include "edukg/cache.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>

#include "edukg/error.h"
#include "json.hpp"

namespace edukg {
namespace {

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace

PersistentCache::PersistentCache(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto record =
        nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.contains("key") ||
        !record.contains("value")) {
      continue;  // torn trailing write
    }
    entries_[record["key"].get<std::string>()] =
        record["value"].get<std::string>();
  }
}

std::optional<std::string> PersistentCache::Get(const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void PersistentCache::Put(const std::string& key, const std::string& value) {
  std::unique_lock lock(mu_);
  entries_[key] = value;
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to cache " + path_);
  nlohmann::json record = {
      {"key", key}, {"value", value}, {"fetched_at", UtcTimestamp()}};
  out << record.dump() << '\n';
}

size_t PersistentCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

}  // namespace edukg
