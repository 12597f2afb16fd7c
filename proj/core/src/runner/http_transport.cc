// Client and server halves of the JSON wire protocol, both on cpp-httplib.

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "usersim/error.h"
#include "usersim/runner/mock_agent.h"
#include "usersim/runner/wire.h"

namespace usersim::runner {

using nlohmann::json;

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host:port
  std::string prefix;  // path prefix without trailing slash
};

ParsedUrl ParseBaseUrl(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0)
    throw Error(ErrorCode::kInvalidConfig, "agent URL must start with http://, got '" + url + "'");
  auto slash = url.find('/', scheme.size());
  ParsedUrl parsed;
  parsed.origin = url.substr(0, slash);
  if (parsed.origin.size() == scheme.size())
    throw Error(ErrorCode::kInvalidConfig, "agent URL '" + url + "' has no host");
  if (slash != std::string::npos) parsed.prefix = url.substr(slash);
  while (!parsed.prefix.empty() && parsed.prefix.back() == '/') parsed.prefix.pop_back();
  return parsed;
}

}  // namespace

void AgentEndpoint::Validate() const {
  if (timeout.count() <= 0) throw Error(ErrorCode::kInvalidConfig, "timeout must be positive");
  if (retry_count < 0) throw Error(ErrorCode::kInvalidConfig, "retry_count must be >= 0");
  ParseBaseUrl(base_url);
}

WireResponse WireExchange(const AgentEndpoint& endpoint, std::string_view session_id,
                          std::string_view utterance, int* attempts) {
  endpoint.Validate();
  ParsedUrl url = ParseBaseUrl(endpoint.base_url);
  httplib::Client client(url.origin);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  const std::string body =
      json{{"session_id", session_id}, {"utterance", utterance}}.dump();
  const std::string path = url.prefix + "/respond";

  httplib::Result result;
  int tries = 0;
  for (; tries <= endpoint.retry_count; ++tries) {
    result = client.Post(path, body, "application/json");
    if (result) break;
  }
  if (attempts) *attempts = std::min(tries + 1, endpoint.retry_count + 1);
  if (!result)
    throw Error(ErrorCode::kTransportError,
                endpoint.base_url + ": " + httplib::to_string(result.error()) + " after " +
                    std::to_string(endpoint.retry_count + 1) + " attempts");
  if (result->status != 200)
    throw Error(ErrorCode::kProtocolError,
                endpoint.base_url + ": HTTP status " + std::to_string(result->status));

  json reply = json::parse(result->body, nullptr, /*allow_exceptions=*/false);
  if (!reply.is_object() || !reply.contains("utterance") || !reply["utterance"].is_string())
    throw Error(ErrorCode::kProtocolError, "response lacks string field 'utterance'");
  if (!reply.contains("terminate") || !reply["terminate"].is_boolean())
    throw Error(ErrorCode::kProtocolError, "response lacks boolean field 'terminate'");
  return {reply["utterance"].get<std::string>(), reply["terminate"].get<bool>()};
}

WireAgent::WireAgent(AgentEndpoint endpoint, std::string session_id)
    : endpoint_(std::move(endpoint)), session_id_(std::move(session_id)) {
  endpoint_.Validate();
}

Reply WireAgent::Exchange(std::string_view utterance) {
  ++requests_;
  WireResponse r = WireExchange(endpoint_, session_id_, utterance);
  return Reply{std::move(r.utterance), r.terminate, {}, {}, {}};
}

Reply WireAgent::Open() { return Exchange(""); }

Reply WireAgent::Respond(std::string_view utterance) { return Exchange(utterance); }

struct MockAgentServer::Impl {
  httplib::Server server;
  std::mutex mu;
  std::map<std::string, std::unique_ptr<MockCrsSession>> sessions;
};

MockAgentServer::MockAgentServer(std::shared_ptr<const ItemCollection> items)
    : items_(std::move(items)), impl_(std::make_unique<Impl>()) {
  impl_->server.Post("/respond", [this](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    json request = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
    if (!request.is_object() || !request.contains("session_id") ||
        !request["session_id"].is_string() || !request.contains("utterance") ||
        !request["utterance"].is_string()) {
      res.status = 400;
      res.set_content(R"({"error":"expected {session_id, utterance}"})", "application/json");
      return;
    }
    Reply reply;
    {
      std::lock_guard lock(impl_->mu);
      auto& session = impl_->sessions[request["session_id"].get<std::string>()];
      if (!session) session = std::make_unique<MockCrsSession>(items_);
      reply = session->Respond(request["utterance"].get<std::string>());
    }
    res.status = 200;
    res.set_content(json{{"utterance", reply.text}, {"terminate", reply.terminate}}.dump(),
                    "application/json");
  });
}

MockAgentServer::~MockAgentServer() { Stop(); }

int MockAgentServer::Start(const std::string& host, int port) {
  host_ = host;
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    if (!impl_->server.bind_to_port(host, port))
      throw Error(ErrorCode::kTransportError,
                  "cannot bind " + host + ":" + std::to_string(port));
    port_ = port;
  }
  if (port_ <= 0) throw Error(ErrorCode::kTransportError, "cannot bind " + host);
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void MockAgentServer::Listen(const std::string& host, int port) {
  host_ = host;
  port_ = port;
  if (!impl_->server.listen(host, port))
    throw Error(ErrorCode::kTransportError,
                "cannot listen on " + host + ":" + std::to_string(port));
}

void MockAgentServer::Stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockAgentServer::base_url() const {
  return "http://" + host_ + ":" + std::to_string(port_);
}

}  // namespace usersim::runner
