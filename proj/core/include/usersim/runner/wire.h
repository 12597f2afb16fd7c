#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "usersim/connector.h"

namespace usersim::runner {

// Remote agent reachable over the JSON wire protocol:
//
//   POST {base_url}/respond
//   request:  {"session_id": string, "utterance": string}
//   response: {"utterance": string, "terminate": boolean}   (status 200)
//
// An empty utterance opens a session.
struct AgentEndpoint {
  std::string base_url;
  std::chrono::milliseconds timeout{5000};
  int retry_count = 2;

  // Throws Error(kInvalidConfig) on a non-positive timeout, negative retry
  // count or a base_url that is not http://host[:port][/prefix].
  void Validate() const;
};

struct WireResponse {
  std::string utterance;
  bool terminate = false;
};

// One exchange. Transport failures are retried up to retry_count times
// (retry_count + 1 attempts in total) and then raise
// Error(kTransportError). A non-200 status or a malformed body raises
// Error(kProtocolError) without retrying. `attempts`, when given, receives
// the number of requests issued.
WireResponse WireExchange(const AgentEndpoint& endpoint, std::string_view session_id,
                          std::string_view utterance, int* attempts = nullptr);

// Agent participant backed by a remote endpoint; one session per instance.
class WireAgent : public DialogueParticipant {
 public:
  WireAgent(AgentEndpoint endpoint, std::string session_id);

  std::string id() const override { return endpoint_.base_url; }
  Reply Open() override;
  Reply Respond(std::string_view utterance) override;

  int requests() const { return requests_; }

 private:
  Reply Exchange(std::string_view utterance);

  AgentEndpoint endpoint_;
  std::string session_id_;
  int requests_ = 0;
};

}  // namespace usersim::runner
