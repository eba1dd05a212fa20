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

#ifndef EDUKG_CACHE_H_
#define EDUKG_CACHE_H_

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

namespace edukg {

// Key/value cache with an optional append-only JSON-lines file behind it.
// Each record is {"key":..., "value":..., "fetched_at":...}; on load the last
// record for a key wins. Readers run concurrently, writes are serialized.
class PersistentCache {
 public:
  // An empty path keeps the cache in memory only.
  explicit PersistentCache(std::string path = "");

  std::optional<std::string> Get(const std::string& key) const;
  void Put(const std::string& key, const std::string& value);
  size_t size() const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::string> entries_;
};

}  // namespace edukg

#endif  // EDUKG_CACHE_H_
