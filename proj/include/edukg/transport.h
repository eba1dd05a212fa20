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

// HTTP transport abstraction shared by the external-service clients.
//
// Clients never talk to the network directly. They build an HttpRequest and
// hand it to a Transport: LiveTransport performs the call, ReplayTransport
// answers from recorded exchanges keyed by a request hash, and
// RecordingTransport captures the exchanges of any inner transport so they
// can be replayed later.

#ifndef EDUKG_TRANSPORT_H_
#define EDUKG_TRANSPORT_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace edukg {

struct HttpRequest {
  std::string method = "GET";
  std::string url;
  std::string content_type;
  std::string accept;
  std::string body;

  // Canonical form hashed for replay lookup: method, url and body.
  std::string Key() const;
  uint64_t Hash() const;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws Error(kServiceUnavailable) when no response could be obtained.
  virtual HttpResponse Send(const HttpRequest& request) = 0;
};

class LiveTransport : public Transport {
 public:
  explicit LiveTransport(
      std::chrono::seconds timeout = std::chrono::seconds(30));
  HttpResponse Send(const HttpRequest& request) override;

 private:
  std::chrono::seconds timeout_;
};

struct RecordedExchange {
  HttpRequest request;
  HttpResponse response;
};

class ReplayTransport : public Transport {
 public:
  ReplayTransport() = default;
  ReplayTransport(ReplayTransport&& other) noexcept
      : exchanges_(std::move(other.exchanges_)) {}

  // Fixture file: {"exchanges":[{"method","url","body","status","response"}]}.
  static ReplayTransport FromFile(const std::string& path);
  static ReplayTransport FromJson(std::string_view content);

  void Add(const HttpRequest& request, HttpResponse response);
  // Unknown requests throw Error(kServiceUnavailable).
  HttpResponse Send(const HttpRequest& request) override;

  size_t size() const;
  std::string ToJson() const;
  void Save(const std::string& path) const;

 private:
  mutable std::mutex mu_;
  std::map<uint64_t, RecordedExchange> exchanges_;
};

class RecordingTransport : public Transport {
 public:
  explicit RecordingTransport(Transport& inner) : inner_(inner) {}
  HttpResponse Send(const HttpRequest& request) override;
  const ReplayTransport& recorded() const { return recorded_; }

 private:
  Transport& inner_;
  ReplayTransport recorded_;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// Sends with exponential backoff. Connection failures, 5xx and 429 responses
// are retried; after the last attempt Error(kServiceUnavailable) is thrown.
HttpResponse SendWithRetry(Transport& transport, const HttpRequest& request,
                           const RetryPolicy& policy,
                           const Sleeper& sleeper = nullptr);

// Caps the number of concurrent in-flight requests of one client.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(int max_in_flight);

  class Slot {
   public:
    explicit Slot(InFlightLimiter& limiter) : limiter_(limiter) {
      limiter_.slots_.acquire();
    }
    ~Slot() { limiter_.slots_.release(); }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

   private:
    InFlightLimiter& limiter_;
  };

 private:
  std::counting_semaphore<1024> slots_;
};

// application/x-www-form-urlencoded encoding of one component.
std::string UrlEncode(std::string_view text);
std::string UrlDecode(std::string_view text);
std::string FormEncode(
    const std::vector<std::pair<std::string, std::string>>& fields);
// Parses "a=1&b=2" into decoded pairs.
std::vector<std::pair<std::string, std::string>> ParseForm(
    std::string_view form);

// FNV-1a, 64-bit.
uint64_t Fnv1a64(std::string_view data);

}  // namespace edukg

#endif  // EDUKG_TRANSPORT_H_
