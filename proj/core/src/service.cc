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

#include "xtars/service.h"

#include <chrono>
#include <utility>

#include "httplib.h"
#include "xtars/error.h"
#include "xtars/log.h"
#include "xtars/text.h"

namespace xtars {

namespace {

HttpReply error_reply(int status, std::string_view reason, std::string_view detail) {
  nlohmann::ordered_json j;
  j["error"] = std::string(reason);
  j["detail"] = std::string(detail);
  return {status, j.dump()};
}

}  // namespace

PredictionService::PredictionService(std::shared_ptr<const ModelBundle> bundle,
                                     ServeSettings settings)
    : bundle_(std::move(bundle)), settings_(std::move(settings)) {
  require(bundle_ != nullptr, "PredictionService: bundle is null");
  require(settings_.max_batch > 0, "PredictionService: max_batch must be positive");
}

nlohmann::ordered_json PredictionService::propose(std::string_view rt) const {
  nlohmann::ordered_json p;
  p["rt"] = std::string(rt);
  if (trim(rt).empty()) {
    p["error"] = "empty_rt";
    return p;
  }
  const PipelineOutput out = run_pipeline(*bundle_, rt);
  const LltEntry& llt = bundle_->ontology.at(out.llt_code);
  p["llt_code"] = llt.llt_code;
  p["llt_name"] = llt.llt_name;
  p["pt_code"] = llt.pt_code;
  p["pt_name"] = llt.pt_name;
  p["confidence"] = select_confidence(out, ConfidenceSource::kAuto);
  p["entropy"] = out.entropy;
  p["bracket"] = out.entropy <= settings_.entropy_threshold ? "certain" : "uncertain";
  p["model_version"] = bundle_->model_version;
  return p;
}

HttpReply PredictionService::handle_predict(std::string_view body) const {
  ++requests_;
  nlohmann::json request;
  try {
    request = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return error_reply(400, "malformed_json", e.what());
  }
  if (!request.is_object() || !request.contains("rts") || !request["rts"].is_array()) {
    return error_reply(400, "malformed_request", "expected an object with an \"rts\" array");
  }
  const auto& rts = request["rts"];
  if (rts.size() > settings_.max_batch) {
    return error_reply(413, "batch_too_large",
                       "batch of " + std::to_string(rts.size()) + " exceeds limit of " +
                           std::to_string(settings_.max_batch));
  }
  for (const auto& rt : rts) {
    if (!rt.is_string()) return error_reply(400, "malformed_request", "rts must be strings");
  }
  nlohmann::ordered_json response;
  response["proposals"] = nlohmann::ordered_json::array();
  for (const auto& rt : rts) {
    response["proposals"].push_back(propose(rt.get_ref<const std::string&>()));
  }
  return {200, response.dump()};
}

HttpReply PredictionService::handle_health() const {
  nlohmann::ordered_json j;
  j["status"] = "ok";
  j["model_version"] = bundle_->model_version;
  j["model"] = bundle_->model_tag();
  j["ontology_version"] = bundle_->ontology.version();
  j["labels"] = bundle_->scorer->labels()->size();
  return {200, j.dump()};
}

struct HttpServer::Impl {
  std::shared_ptr<const PredictionService> service;
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const PredictionService> service)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto svc = impl_->service;
  impl_->server.Post("/predict", [svc](const httplib::Request& req, httplib::Response& res) {
    const auto start = std::chrono::steady_clock::now();
    HttpReply reply;
    try {
      reply = svc->handle_predict(req.body);
    } catch (const std::exception& e) {
      reply = error_reply(500, "internal_error", e.what());
    }
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
    const auto ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start).count();
    log_event(reply.status == 200 ? LogLevel::kInfo : LogLevel::kWarn, "predict",
              {{"status", reply.status}, {"bytes", req.body.size()}, {"ms", ms}});
  });
  impl_->server.Get("/health", [svc](const httplib::Request&, httplib::Response& res) {
    const HttpReply reply = svc->handle_health();
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  });
  // Leaves room for max_batch long RTs.
  impl_->server.set_payload_max_length(64u << 20);
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::listen(const std::string& host, int port) {
  if (port == 0) {
    bind_any_port(host);
    listen_after_bind();
    return;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    fail(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  log_event(LogLevel::kInfo, "listening", {{"host", host}, {"port", port}});
  listen_after_bind();
}

int HttpServer::bind_any_port(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) fail(ErrorCode::kIo, "cannot bind " + host);
  return port;
}

void HttpServer::listen_after_bind() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace xtars
