#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flarebench/types.hpp"

namespace flarebench::wire {

std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::vector<std::uint8_t> base64_decode(const std::string& text);  // throws ProtocolError

/// Frames a message: 4-byte big-endian unsigned length, then UTF-8 JSON.
std::string frame_message(const nlohmann::json& msg);

/// Parses a 4-byte big-endian length prefix.
std::uint32_t parse_length(const std::uint8_t prefix[4]);

nlohmann::json frame_to_json(const Frame& frame);
Frame frame_from_json(const nlohmann::json& obj);  // throws ProtocolError

nlohmann::json detections_to_json(const std::vector<Detection>& dets);
std::vector<Detection> detections_from_json(const nlohmann::json& items);  // throws ProtocolError

nlohmann::json make_hello();
nlohmann::json make_capabilities(const std::vector<std::string>& classes);
nlohmann::json make_detect_request(const Frame& frame);
nlohmann::json make_denoise_request(const Frame& frame);
nlohmann::json make_detections_response(const std::vector<Detection>& dets);
nlohmann::json make_frame_response(const Frame& frame);

}  // namespace flarebench::wire
