#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace hlsr::llm {

enum class Role { System, User, Assistant };

std::string_view to_string(Role r);
std::optional<Role> parse_role(std::string_view s);

struct Message {
  Role role = Role::User;
  std::string content;
  friend bool operator==(const Message&, const Message&) = default;
};

/// Roles alternate user/assistant after an optional leading system message.
class Conversation {
 public:
  explicit Conversation(std::string id = {}) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }
  const std::vector<Message>& messages() const { return messages_; }
  bool ends_with_user() const { return !messages_.empty() && messages_.back().role == Role::User; }

  /// Throws std::invalid_argument if the message would break alternation or is empty.
  void append(Message m);
  void append(Role r, std::string content) { append(Message{r, std::move(content)}); }

  /// Drops the trailing message (used to withdraw an assistant answer that was not accepted).
  void pop_back();

  friend bool operator==(const Conversation&, const Conversation&) = default;

 private:
  std::string id_;
  std::vector<Message> messages_;
};

nlohmann::json to_json(const Conversation& c);
Conversation conversation_from_json(const nlohmann::json& j);

}  // namespace hlsr::llm
