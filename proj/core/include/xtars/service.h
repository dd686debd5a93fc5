//
// Copyright 2026 The xtars Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef XTARS_SERVICE_H_
#define XTARS_SERVICE_H_

#include <atomic>
#include <memory>
#include <string>
#include <string_view>

#include "json.hpp"
#include "xtars/bundle.h"
#include "xtars/config.h"

namespace xtars {

struct HttpReply {
  int status = 200;
  std::string body;
};

// Request handling over an immutable bundle. Safe to call concurrently.
class PredictionService {
 public:
  PredictionService(std::shared_ptr<const ModelBundle> bundle, ServeSettings settings);

  // POST /predict with {"rts": [...]}. 400 on malformed input, 413 when the
  // batch exceeds max_batch. Empty rts get a per-item {"error": "empty_rt"}.
  HttpReply handle_predict(std::string_view body) const;
  // GET /health
  HttpReply handle_health() const;

  nlohmann::ordered_json propose(std::string_view rt) const;

  const ServeSettings& settings() const { return settings_; }
  std::uint64_t requests_served() const { return requests_.load(); }

 private:
  std::shared_ptr<const ModelBundle> bundle_;
  ServeSettings settings_;
  mutable std::atomic<std::uint64_t> requests_{0};
};

class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const PredictionService> service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and serves until stop(). A port of 0 picks a free port.
  void listen(const std::string& host, int port);
  // Binds a free port and returns it; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  void listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace xtars

#endif  // XTARS_SERVICE_H_
