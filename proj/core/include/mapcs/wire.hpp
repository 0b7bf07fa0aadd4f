#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace mapcs {

enum class MessageType {
  join,
  session_config,
  chat_send,
  chat_recv,
  move,
  game_state,
  game_over,
  questionnaire_submit,
  error,
};

std::string_view to_string(MessageType t);
std::optional<MessageType> parse_message_type(std::string_view s);

/// Malformed or out-of-order client input.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// One JSON frame: {"type", "session_id", "seq", "payload"}. `seq` counts up
/// per session and direction, starting at 1.
struct WireMessage {
  MessageType type = MessageType::error;
  std::string session_id;
  std::uint64_t seq = 0;
  nlohmann::json payload = nlohmann::json::object();

  nlohmann::json to_json() const;
  std::string dump() const { return to_json().dump(); }
  /// Throws ProtocolError("bad_message") for frames that do not fit the envelope.
  static WireMessage from_json(const nlohmann::json& j);
  static WireMessage parse(std::string_view text);
};

WireMessage error_message(std::string_view session_id, std::string_view code, std::string_view message);

/// Lowercase hex SHA-256, used to fingerprint raw backend replies.
std::string sha256_hex(std::string_view data);

}  // namespace mapcs
