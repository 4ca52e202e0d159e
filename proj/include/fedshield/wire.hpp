#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fedshield/bytes.hpp"
#include "fedshield/nn.hpp"

namespace fedshield::wire {

inline constexpr std::uint8_t kProtocolVersion = 0x01;
inline constexpr std::size_t kMaxPayload = 64u << 20;

enum class MsgType {
    auth_hello,
    auth_register,
    auth_challenge,
    auth_response,
    auth_result,
    model_broadcast,
    update_submit,
    force_disconnect,
    bye,
};

inline std::string_view to_string(MsgType t) {
    switch (t) {
        case MsgType::auth_hello: return "AUTH_HELLO";
        case MsgType::auth_register: return "AUTH_REGISTER";
        case MsgType::auth_challenge: return "AUTH_CHALLENGE";
        case MsgType::auth_response: return "AUTH_RESPONSE";
        case MsgType::auth_result: return "AUTH_RESULT";
        case MsgType::model_broadcast: return "MODEL_BROADCAST";
        case MsgType::update_submit: return "UPDATE_SUBMIT";
        case MsgType::force_disconnect: return "FORCE_DISCONNECT";
        case MsgType::bye: return "BYE";
    }
    return "?";
}

inline std::optional<MsgType> msg_type_from(std::string_view s) {
    for (auto t : {MsgType::auth_hello, MsgType::auth_register, MsgType::auth_challenge,
                   MsgType::auth_response, MsgType::auth_result, MsgType::model_broadcast,
                   MsgType::update_submit, MsgType::force_disconnect, MsgType::bye})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

// {type, round?, id?, body}; type-specific fields live in body. Group
// elements and scalars travel as lowercase hex of their canonical
// encodings, parameter vectors as base64 of little-endian doubles.
struct Message {
    MsgType type = MsgType::bye;
    std::optional<int> round;
    std::optional<std::string> id;
    nlohmann::json body = nlohmann::json::object();

    friend bool operator==(const Message&, const Message&) = default;
};

inline nlohmann::json to_json(const Message& m) {
    nlohmann::json j;
    j["type"] = to_string(m.type);
    if (m.round) j["round"] = *m.round;
    if (m.id) j["id"] = *m.id;
    j["body"] = m.body;
    return j;
}

inline std::optional<Message> message_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) return std::nullopt;
    auto type = msg_type_from(j["type"].get<std::string>());
    if (!type) return std::nullopt;
    Message m;
    m.type = *type;
    if (j.contains("round")) {
        if (!j["round"].is_number_integer()) return std::nullopt;
        m.round = j["round"].get<int>();
    }
    if (j.contains("id")) {
        if (!j["id"].is_string()) return std::nullopt;
        m.id = j["id"].get<std::string>();
    }
    if (j.contains("body")) {
        if (!j["body"].is_object()) return std::nullopt;
        m.body = j["body"];
    }
    return m;
}

// Frame layout: version byte, 4-byte big-endian payload length, UTF-8 JSON.
inline Bytes encode_frame(const Message& m) {
    const std::string payload = to_json(m).dump();
    Bytes out;
    out.reserve(5 + payload.size());
    out.push_back(kProtocolVersion);
    put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

struct FrameHeader {
    std::uint8_t version;
    std::uint32_t length;
};

inline std::optional<FrameHeader> decode_frame_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 5) return std::nullopt;
    FrameHeader h{bytes[0], get_u32_be(bytes.subspan(1))};
    if (h.version != kProtocolVersion || h.length > kMaxPayload) return std::nullopt;
    return h;
}

// Whole-buffer decode used by tests and the in-process paths.
inline std::optional<Message> decode_frame(std::span<const std::uint8_t> bytes) {
    auto header = decode_frame_header(bytes);
    if (!header || bytes.size() != 5u + header->length) return std::nullopt;
    auto j = nlohmann::json::parse(bytes.begin() + 5, bytes.end(), nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return message_from_json(j);
}

inline std::string params_to_b64(const nn::ParamVector& params) {
    return base64_encode(doubles_to_le_bytes(params));
}

inline std::optional<nn::ParamVector> params_from_b64(const std::string& text) {
    auto bytes = base64_decode(text);
    if (!bytes) return std::nullopt;
    return doubles_from_le_bytes(*bytes);
}

} // namespace fedshield::wire
