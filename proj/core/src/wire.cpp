#include "mapcs/wire.hpp"

#include <openssl/evp.h>

#include <array>

namespace mapcs {

namespace {

constexpr std::array<std::pair<MessageType, std::string_view>, 9> kNames = {{
    {MessageType::join, "join"},
    {MessageType::session_config, "session_config"},
    {MessageType::chat_send, "chat_send"},
    {MessageType::chat_recv, "chat_recv"},
    {MessageType::move, "move"},
    {MessageType::game_state, "game_state"},
    {MessageType::game_over, "game_over"},
    {MessageType::questionnaire_submit, "questionnaire_submit"},
    {MessageType::error, "error"},
}};

}  // namespace

std::string_view to_string(MessageType t) {
  for (const auto& [type, name] : kNames) {
    if (type == t) return name;
  }
  return "error";
}

std::optional<MessageType> parse_message_type(std::string_view s) {
  for (const auto& [type, name] : kNames) {
    if (name == s) return type;
  }
  return std::nullopt;
}

nlohmann::json WireMessage::to_json() const {
  return {{"type", std::string(to_string(type))}, {"session_id", session_id}, {"seq", seq}, {"payload", payload}};
}

WireMessage WireMessage::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ProtocolError("bad_message", "message must be a JSON object");
  WireMessage m;
  auto type = j.find("type");
  if (type == j.end() || !type->is_string()) throw ProtocolError("bad_message", "message needs a string 'type'");
  auto parsed = parse_message_type(type->get<std::string>());
  if (!parsed) throw ProtocolError("bad_message", "unknown message type '" + type->get<std::string>() + "'");
  m.type = *parsed;
  if (auto sid = j.find("session_id"); sid != j.end()) {
    if (!sid->is_string()) throw ProtocolError("bad_message", "'session_id' must be a string");
    m.session_id = sid->get<std::string>();
  }
  if (auto seq = j.find("seq"); seq != j.end()) {
    if (!seq->is_number_unsigned()) throw ProtocolError("bad_message", "'seq' must be a non-negative integer");
    m.seq = seq->get<std::uint64_t>();
  }
  if (auto payload = j.find("payload"); payload != j.end()) {
    if (!payload->is_object()) throw ProtocolError("bad_message", "'payload' must be an object");
    m.payload = *payload;
  }
  return m;
}

WireMessage WireMessage::parse(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError("bad_message", std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

WireMessage error_message(std::string_view session_id, std::string_view code, std::string_view message) {
  WireMessage m;
  m.type = MessageType::error;
  m.session_id = std::string(session_id);
  m.payload = {{"code", std::string(code)}, {"message", std::string(message)}};
  return m;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace mapcs
