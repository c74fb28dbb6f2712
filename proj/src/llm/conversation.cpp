#include "hlsr/llm/conversation.hpp"

#include <stdexcept>

namespace hlsr::llm {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "system") return Role::System;
  if (s == "user") return Role::User;
  if (s == "assistant") return Role::Assistant;
  return std::nullopt;
}

void Conversation::append(Message m) {
  if (m.content.empty()) throw std::invalid_argument("message content is empty");
  if (m.role == Role::System) {
    if (!messages_.empty()) throw std::invalid_argument("system message must come first");
  } else {
    Role expect = Role::User;
    if (!messages_.empty() && messages_.back().role == Role::User) expect = Role::Assistant;
    if (m.role != expect)
      throw std::invalid_argument("expected " + std::string(to_string(expect)) + " message, got " +
                                  std::string(to_string(m.role)));
  }
  messages_.push_back(std::move(m));
}

void Conversation::pop_back() {
  if (messages_.empty()) throw std::invalid_argument("conversation is empty");
  messages_.pop_back();
}

nlohmann::json to_json(const Conversation& c) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : c.messages()) msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  return {{"id", c.id()}, {"messages", msgs}};
}

Conversation conversation_from_json(const nlohmann::json& j) {
  Conversation c(j.value("id", ""));
  for (const auto& m : j.at("messages")) {
    auto role = parse_role(m.at("role").get<std::string>());
    if (!role) throw std::invalid_argument("unknown role " + m.at("role").dump());
    c.append(*role, m.at("content").get<std::string>());
  }
  return c;
}

}  // namespace hlsr::llm
