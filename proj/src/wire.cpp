#include "flarebench/wire.hpp"

#include "flarebench/errors.hpp"

namespace flarebench::wire {

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}
}  // namespace

std::string base64_encode(const std::uint8_t* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        const std::uint32_t b0 = data[i];
        const std::uint32_t b1 = i + 1 < len ? data[i + 1] : 0;
        const std::uint32_t b2 = i + 2 < len ? data[i + 2] : 0;
        const std::uint32_t triple = (b0 << 16) | (b1 << 8) | b2;
        out.push_back(kAlphabet[(triple >> 18) & 0x3f]);
        out.push_back(kAlphabet[(triple >> 12) & 0x3f]);
        out.push_back(i + 1 < len ? kAlphabet[(triple >> 6) & 0x3f] : '=');
        out.push_back(i + 2 < len ? kAlphabet[triple & 0x3f] : '=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    if (text.size() % 4 != 0) throw ProtocolError("base64 payload length not a multiple of 4");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            const char c = text[i + j];
            if (c == '=') {
                if (i + 4 < text.size() || j < 2) throw ProtocolError("unexpected base64 padding");
                vals[j] = 0;
                ++pad;
            } else {
                vals[j] = decode_char(c);
                if (vals[j] < 0 || pad > 0) throw ProtocolError("invalid base64 character");
            }
        }
        const std::uint32_t triple = (static_cast<std::uint32_t>(vals[0]) << 18) |
                                     (static_cast<std::uint32_t>(vals[1]) << 12) |
                                     (static_cast<std::uint32_t>(vals[2]) << 6) |
                                     static_cast<std::uint32_t>(vals[3]);
        out.push_back(static_cast<std::uint8_t>((triple >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>((triple >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(triple & 0xff));
    }
    return out;
}

std::string frame_message(const nlohmann::json& msg) {
    const std::string payload = msg.dump();
    const auto n = static_cast<std::uint32_t>(payload.size());
    std::string out;
    out.reserve(payload.size() + 4);
    out.push_back(static_cast<char>((n >> 24) & 0xff));
    out.push_back(static_cast<char>((n >> 16) & 0xff));
    out.push_back(static_cast<char>((n >> 8) & 0xff));
    out.push_back(static_cast<char>(n & 0xff));
    out += payload;
    return out;
}

std::uint32_t parse_length(const std::uint8_t prefix[4]) {
    return (static_cast<std::uint32_t>(prefix[0]) << 24) | (static_cast<std::uint32_t>(prefix[1]) << 16) |
           (static_cast<std::uint32_t>(prefix[2]) << 8) | static_cast<std::uint32_t>(prefix[3]);
}

nlohmann::json frame_to_json(const Frame& frame) {
    return {{"width", frame.width()},
            {"height", frame.height()},
            {"pixels_b64", base64_encode(frame.pixels().data(), frame.pixels().size())}};
}

Frame frame_from_json(const nlohmann::json& obj) {
    if (!obj.is_object() || !obj.contains("width") || !obj.contains("height") || !obj.contains("pixels_b64"))
        throw ProtocolError("frame object requires width, height, pixels_b64");
    int width = 0, height = 0;
    std::vector<std::uint8_t> pixels;
    try {
        width = obj.at("width").get<int>();
        height = obj.at("height").get<int>();
        pixels = base64_decode(obj.at("pixels_b64").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("malformed frame object: ") + e.what());
    }
    if (width < 1 || height < 1 || pixels.size() != static_cast<std::size_t>(3) * width * height)
        throw ProtocolError("frame pixel payload does not match dimensions");
    return Frame(width, height, std::move(pixels));
}

nlohmann::json detections_to_json(const std::vector<Detection>& dets) {
    nlohmann::json items = nlohmann::json::array();
    for (const Detection& d : dets)
        items.push_back({{"x_min", d.box.x_min},
                         {"y_min", d.box.y_min},
                         {"x_max", d.box.x_max},
                         {"y_max", d.box.y_max},
                         {"class", d.class_label},
                         {"confidence", d.confidence}});
    return items;
}

std::vector<Detection> detections_from_json(const nlohmann::json& items) {
    if (!items.is_array()) throw ProtocolError("detections items must be an array");
    std::vector<Detection> dets;
    dets.reserve(items.size());
    for (const auto& item : items) {
        Detection d;
        try {
            d.box.x_min = item.at("x_min").get<double>();
            d.box.y_min = item.at("y_min").get<double>();
            d.box.x_max = item.at("x_max").get<double>();
            d.box.y_max = item.at("y_max").get<double>();
            d.class_label = item.at("class").get<std::string>();
            d.confidence = item.at("confidence").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("malformed detection item: ") + e.what());
        }
        if (!(d.confidence >= 0.0 && d.confidence <= 1.0))
            throw ProtocolError("detection confidence must be in [0, 1]");
        if (!d.box.valid()) throw ProtocolError("detection box must satisfy x_min < x_max and y_min < y_max");
        dets.push_back(std::move(d));
    }
    return dets;
}

nlohmann::json make_hello() { return {{"type", "hello"}}; }

nlohmann::json make_capabilities(const std::vector<std::string>& classes) {
    return {{"type", "capabilities"}, {"classes", classes}};
}

nlohmann::json make_detect_request(const Frame& frame) {
    return {{"type", "detect"}, {"frame", frame_to_json(frame)}};
}

nlohmann::json make_denoise_request(const Frame& frame) {
    return {{"type", "denoise"}, {"frame", frame_to_json(frame)}};
}

nlohmann::json make_detections_response(const std::vector<Detection>& dets) {
    return {{"type", "detections"}, {"items", detections_to_json(dets)}};
}

nlohmann::json make_frame_response(const Frame& frame) {
    return {{"type", "frame"}, {"frame", frame_to_json(frame)}};
}

}  // namespace flarebench::wire
