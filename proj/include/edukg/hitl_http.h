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

// JSON-over-HTTP surface of the review service.
//
//   POST   /materials?title=&id=           body: glyph document
//   POST   /materials/{id}/drafts?mode=top-down|bottom-up
//   GET    /drafts/{id}
//   GET    /drafts/{id}/concepts
//   DELETE /drafts/{id}/concepts/{uri}?expected_version=N
//   POST   /drafts/{id}/concepts           {"query", "slides",
//   "expected_version"} POST   /drafts/{id}/finalize {"expected_version"} GET
//   /materials/{id}/edukg GET    /materials/{id}/slides/{n}/edukg?k=5
//
// Errors are {"error": {"code": "<ErrorCode name>", "message": "..."}}.

#ifndef EDUKG_HITL_HTTP_H_
#define EDUKG_HITL_HTTP_H_

#include <memory>
#include <string>

#include "edukg/error.h"
#include "edukg/hitl.h"

namespace httplib {
class Server;
}

namespace edukg {

int HttpStatusFor(ErrorCode code);
std::string ErrorBody(ErrorCode code, std::string_view message);

class HitlHttpServer {
 public:
  explicit HitlHttpServer(HitlService& service);
  ~HitlHttpServer();

  // Returns the bound port, or -1.
  int BindToAnyPort(const std::string& host);
  bool Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool ListenAfterBind();
  // Blocks until ListenAfterBind() is accepting connections.
  void WaitUntilReady() const;
  void Stop();

 private:
  void Routes();

  HitlService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace edukg

#endif  // EDUKG_HITL_HTTP_H_
