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

#include "edukg/transport.h"

#include <fstream>
#include <sstream>
#include <thread>

#include "edukg/error.h"
#include "httplib.h"
#include "json.hpp"

namespace edukg {
namespace {

using nlohmann::json;

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // path plus query, at least "/"
};

SplitUrl Split(const std::string& url) {
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "URL without scheme: " + url);
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

uint64_t Fnv1a64(std::string_view data) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string HttpRequest::Key() const {
  return method + "\n" + url + "\n" + body;
}

uint64_t HttpRequest::Hash() const { return Fnv1a64(Key()); }

LiveTransport::LiveTransport(std::chrono::seconds timeout)
    : timeout_(timeout) {}

HttpResponse LiveTransport::Send(const HttpRequest& request) {
  const SplitUrl url = Split(request.url);
  httplib::Client client(url.origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  httplib::Headers headers;
  if (!request.accept.empty()) headers.emplace("Accept", request.accept);
  httplib::Result result;
  if (request.method == "GET") {
    result = client.Get(url.path, headers);
  } else if (request.method == "POST") {
    result =
        client.Post(url.path, headers, request.body,
                    request.content_type.empty() ? "application/octet-stream"
                                                 : request.content_type);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unsupported method " + request.method);
  }
  if (!result) {
    throw Error(ErrorCode::kServiceUnavailable,
                request.url + ": " + httplib::to_string(result.error()));
  }
  return HttpResponse{result->status, result->body};
}

ReplayTransport ReplayTransport::FromJson(std::string_view content) {
  ReplayTransport replay;
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("fixture file: ") + e.what());
  }
  if (!doc.contains("exchanges") || !doc["exchanges"].is_array()) {
    throw Error(ErrorCode::kInvalidArgument,
                "fixture file: missing 'exchanges' array");
  }
  for (const json& entry : doc["exchanges"]) {
    HttpRequest request;
    request.method = entry.value("method", "GET");
    request.url = entry.at("url").get<std::string>();
    request.body = entry.value("body", "");
    HttpResponse response;
    response.status = entry.value("status", 200);
    response.body = entry.value("response", "");
    replay.Add(request, std::move(response));
  }
  return replay;
}

ReplayTransport ReplayTransport::FromFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open fixture file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

void ReplayTransport::Add(const HttpRequest& request, HttpResponse response) {
  std::lock_guard lock(mu_);
  exchanges_[request.Hash()] = RecordedExchange{request, std::move(response)};
}

HttpResponse ReplayTransport::Send(const HttpRequest& request) {
  std::lock_guard lock(mu_);
  auto it = exchanges_.find(request.Hash());
  if (it == exchanges_.end()) {
    throw Error(
        ErrorCode::kServiceUnavailable,
        "no recorded response for " + request.method + " " + request.url);
  }
  return it->second.response;
}

size_t ReplayTransport::size() const {
  std::lock_guard lock(mu_);
  return exchanges_.size();
}

std::string ReplayTransport::ToJson() const {
  std::lock_guard lock(mu_);
  json exchanges = json::array();
  for (const auto& [hash, exchange] : exchanges_) {
    exchanges.push_back({{"method", exchange.request.method},
                         {"url", exchange.request.url},
                         {"body", exchange.request.body},
                         {"status", exchange.response.status},
                         {"response", exchange.response.body}});
  }
  return json{{"exchanges", exchanges}}.dump(2) + "\n";
}

void ReplayTransport::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write fixture file " + path);
  out << ToJson();
}

HttpResponse RecordingTransport::Send(const HttpRequest& request) {
  HttpResponse response = inner_.Send(request);
  recorded_.Add(request, response);
  return response;
}

HttpResponse SendWithRetry(Transport& transport, const HttpRequest& request,
                           const RetryPolicy& policy, const Sleeper& sleeper) {
  const int attempts = std::max(1, policy.attempts);
  std::chrono::milliseconds backoff = policy.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    try {
      HttpResponse response = transport.Send(request);
      if (response.status < 500 && response.status != 429) return response;
      last_error = "HTTP " + std::to_string(response.status);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kServiceUnavailable) throw;
      last_error = e.what();
    }
    if (attempt < attempts && backoff.count() > 0) {
      if (sleeper) {
        sleeper(backoff);
      } else {
        std::this_thread::sleep_for(backoff);
      }
    }
    backoff *= 2;
  }
  throw Error(ErrorCode::kServiceUnavailable, request.url + " failed after " +
                                                  std::to_string(attempts) +
                                                  " attempts: " + last_error);
}

InFlightLimiter::InFlightLimiter(int max_in_flight)
    : slots_(std::max(1, std::min(max_in_flight, 1024))) {}

std::string UrlEncode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' ||
        c == '~') {
      out += static_cast<char>(c);
    } else if (c == ' ') {
      out += '+';
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string UrlDecode(std::string_view text) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '+') {
      out += ' ';
    } else if (text[i] == '%' && i + 2 < text.size() && hex(text[i + 1]) >= 0 &&
               hex(text[i + 2]) >= 0) {
      out += static_cast<char>(hex(text[i + 1]) * 16 + hex(text[i + 2]));
      i += 2;
    } else {
      out += text[i];
    }
  }
  return out;
}

std::string FormEncode(
    const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string out;
  for (const auto& [key, value] : fields) {
    if (!out.empty()) out += '&';
    out += UrlEncode(key);
    out += '=';
    out += UrlEncode(value);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ParseForm(
    std::string_view form) {
  std::vector<std::pair<std::string, std::string>> fields;
  size_t start = 0;
  while (start <= form.size()) {
    size_t end = form.find('&', start);
    if (end == std::string_view::npos) end = form.size();
    std::string_view part = form.substr(start, end - start);
    if (!part.empty()) {
      const size_t eq = part.find('=');
      if (eq == std::string_view::npos) {
        fields.emplace_back(UrlDecode(part), "");
      } else {
        fields.emplace_back(UrlDecode(part.substr(0, eq)),
                            UrlDecode(part.substr(eq + 1)));
      }
    }
    start = end + 1;
  }
  return fields;
}

}  // namespace edukg
