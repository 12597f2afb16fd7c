#include "usersim/runner/mock_agent.h"

#include <algorithm>
#include <set>

#include "string_util.h"
#include "usersim/nlu/tokenizer.h"

namespace usersim::runner {
namespace {

const std::set<std::string> kFarewell{"bye", "goodbye", "quit"};
const std::set<std::string> kNegation{"not", "no", "don", "dont", "hate", "dislike", "never"};
const std::set<std::string> kReject{"no",    "not",  "seen",      "another", "else",
                                    "other", "don",  "dont",      "hate",    "dislike",
                                    "never", "nope", "different", "boring"};
const std::set<std::string> kAccept{"yes",     "sure", "great", "watch", "ok",   "okay",
                                    "perfect", "fine", "sounds", "thanks", "thank", "yeah"};
const std::set<std::string> kInquire{"what", "about", "more", "tell", "plot", "who", "describe"};

bool Any(const std::vector<std::string>& tokens, const std::set<std::string>& words) {
  return std::any_of(tokens.begin(), tokens.end(),
                     [&](const std::string& t) { return words.contains(t); });
}

}  // namespace

MockCrsSession::MockCrsSession(std::shared_ptr<const ItemCollection> items)
    : items_(std::move(items)) {
  for (const auto& genre : items_->DistinctValues("genre")) {
    auto tokens = nlu::Tokenize(genre);
    if (!tokens.empty()) genre_phrases_.emplace_back(std::move(tokens), genre);
  }
  std::stable_sort(genre_phrases_.begin(), genre_phrases_.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
}

Reply MockCrsSession::Say(std::string intent, std::string text, bool terminate) {
  last_intent_ = std::move(intent);
  if (terminate) state_ = State::kDone;
  return Reply{std::move(text), terminate, {}, {}, {}};
}

std::vector<std::string> MockCrsSession::FindGenres(
    const std::vector<std::string>& tokens) const {
  std::vector<std::string> found;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& [phrase, genre] : genre_phrases_) {
      if (i + phrase.size() > tokens.size()) continue;
      if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        found.push_back(genre);
        i += phrase.size() - 1;
        break;
      }
    }
  }
  return found;
}

Reply MockCrsSession::StartRecommending(const std::string& genre) {
  genre_ = genre;
  matches_.clear();
  for (const auto& item : items_->items())
    if (item.HasValue("genre", genre)) matches_.push_back(&item);
  next_match_ = 0;
  state_ = State::kRecommending;
  return RecommendNext();
}

Reply MockCrsSession::RecommendNext() {
  if (next_match_ >= matches_.size())
    return Say("BYE", "Sorry, I have no more " + genre_ + " movies to recommend. Goodbye!",
               true);
  current_ = matches_[next_match_++];
  ++recommendations_;
  if (recommendations_ % 2 == 1)
    return Say("RECOMMEND", "I would recommend " + current_->name + ". Have you seen it?");
  return Say("RECOMMEND", "How about " + current_->name + "? It is a great " + genre_ + " movie.");
}

Reply MockCrsSession::Respond(std::string_view user_text) {
  const auto tokens = nlu::Tokenize(user_text);
  if (state_ == State::kDone) return Say("BYE", "Goodbye!", true);
  if (state_ == State::kNew) {
    state_ = State::kWelcomed;
    return Say("WELCOME",
               "Hello, I am a movie recommender. I can help you find a movie to watch.");
  }
  if (Any(tokens, kFarewell)) return Say("BYE", "Goodbye, have a nice day!", true);

  const bool negated = Any(tokens, kNegation);
  const auto genres = FindGenres(tokens);

  switch (state_) {
    case State::kWelcomed:
      if (!genres.empty() && !negated) return StartRecommending(genres.front());
      state_ = State::kEliciting;
      return Say("ELICIT", "Which genre of movies do you like?");
    case State::kEliciting:
      if (!genres.empty() && !negated) return StartRecommending(genres.front());
      if (!genres.empty()) return Say("ELICIT", "Which other genre would you prefer instead?");
      break;
    case State::kRecommending:
      if (Any(tokens, kReject)) return RecommendNext();
      if (Any(tokens, kAccept))
        return Say("BYE", "Great choice, enjoy the movie! Goodbye.", true);
      if (!genres.empty()) return StartRecommending(genres.front());
      if (Any(tokens, kInquire) && current_ != nullptr) {
        std::string text = current_->name + " is a " +
                           internal::Join(current_->Values("genre"), " and ") + " movie";
        const auto& keywords = current_->Values("keyword");
        if (!keywords.empty()) text += " about " + internal::Join(keywords, " and ");
        return Say("INFORM", text + ".");
      }
      break;
    case State::kNew:
    case State::kDone:
      break;
  }
  return Say("UNKNOWN", "Sorry, I did not understand that. Could you rephrase?");
}

}  // namespace usersim::runner
