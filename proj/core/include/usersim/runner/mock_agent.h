#pragma once

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "usersim/connector.h"
#include "usersim/items.h"

namespace usersim::runner {

inline constexpr std::string_view kMockAgentId = "mock-crs";

// Scripted movie recommender standing in for a real CRS. It greets, asks
// for a genre, recommends matching items in collection order, moves to the
// next match on rejection and says goodbye on acceptance or when it runs
// out. Input it cannot place gets a clarification request.
class MockCrsSession {
 public:
  explicit MockCrsSession(std::shared_ptr<const ItemCollection> items);

  // Empty input on a fresh session opens the conversation.
  Reply Respond(std::string_view user_text);

  // Agent-side intent of the most recent reply (WELCOME, ELICIT, RECOMMEND,
  // INFORM, UNKNOWN or BYE); useful for tests.
  const std::string& last_intent() const { return last_intent_; }

 private:
  enum class State { kNew, kWelcomed, kEliciting, kRecommending, kDone };

  Reply Say(std::string intent, std::string text, bool terminate = false);
  Reply StartRecommending(const std::string& genre);
  Reply RecommendNext();
  std::vector<std::string> FindGenres(const std::vector<std::string>& tokens) const;

  std::shared_ptr<const ItemCollection> items_;
  std::vector<std::pair<std::vector<std::string>, std::string>> genre_phrases_;
  State state_ = State::kNew;
  std::string genre_;
  std::vector<const Item*> matches_;
  std::size_t next_match_ = 0;
  const Item* current_ = nullptr;
  std::string last_intent_;
  int recommendations_ = 0;
};

// In-process participant wrapper around MockCrsSession.
class MockAgent : public DialogueParticipant {
 public:
  explicit MockAgent(std::shared_ptr<const ItemCollection> items) : session_(std::move(items)) {}

  std::string id() const override { return std::string(kMockAgentId); }
  Reply Open() override { return session_.Respond(""); }
  Reply Respond(std::string_view utterance) override { return session_.Respond(utterance); }

  const MockCrsSession& session() const { return session_; }

 private:
  MockCrsSession session_;
};

// Serves MockCrsSession instances over the wire protocol, keyed by
// session_id.
class MockAgentServer {
 public:
  explicit MockAgentServer(std::shared_ptr<const ItemCollection> items);
  ~MockAgentServer();

  MockAgentServer(const MockAgentServer&) = delete;
  MockAgentServer& operator=(const MockAgentServer&) = delete;

  // Binds to host:port (port 0 picks a free port) and serves on a
  // background thread. Returns the bound port.
  int Start(const std::string& host = "127.0.0.1", int port = 0);
  // Blocks serving on the calling thread.
  void Listen(const std::string& host, int port);
  void Stop();

  int port() const { return port_; }
  std::string base_url() const;
  std::size_t requests_served() const { return requests_.load(); }

 private:
  struct Impl;

  std::shared_ptr<const ItemCollection> items_;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  std::string host_ = "127.0.0.1";
  int port_ = 0;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace usersim::runner
