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

#ifndef EDUKG_RUN_LOG_H_
#define EDUKG_RUN_LOG_H_

#include <mutex>
#include <string>
#include <vector>

namespace edukg {

// Warnings and ordered stage events of one run. Safe for concurrent use.
class RunLog {
 public:
  void Warn(std::string message) {
    std::lock_guard lock(mu_);
    warnings_.push_back(std::move(message));
  }
  void Event(std::string name) {
    std::lock_guard lock(mu_);
    events_.push_back(std::move(name));
  }
  std::vector<std::string> warnings() const {
    std::lock_guard lock(mu_);
    return warnings_;
  }
  std::vector<std::string> events() const {
    std::lock_guard lock(mu_);
    return events_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<std::string> warnings_;
  std::vector<std::string> events_;
};

}  // namespace edukg

#endif  // EDUKG_RUN_LOG_H_
