// Reference worker speaking the flarebench length-prefixed JSON protocol on
// stdin/stdout. Serves detect requests with the in-process reference detector
// and denoise requests with the chroma clamp, so the wire path can be checked
// against the library bit for bit. --misbehave modes exist for protocol tests.

#include <cstdio>
#include <cstring>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flarebench/detector.hpp"
#include "flarebench/pipeline.hpp"
#include "flarebench/wire.hpp"

using namespace flarebench;

namespace {

bool read_exact(std::uint8_t* dst, std::size_t want) {
    std::size_t got = 0;
    while (got < want) {
        const ssize_t n = ::read(STDIN_FILENO, dst + got, want - got);
        if (n <= 0) return false;
        got += static_cast<std::size_t>(n);
    }
    return true;
}

bool write_all(const std::string& bytes) {
    std::size_t off = 0;
    while (off < bytes.size()) {
        const ssize_t n = ::write(STDOUT_FILENO, bytes.data() + off, bytes.size() - off);
        if (n <= 0) return false;
        off += static_cast<std::size_t>(n);
    }
    return true;
}

std::optional<nlohmann::json> read_message() {
    std::uint8_t prefix[4];
    if (!read_exact(prefix, 4)) return std::nullopt;
    const std::uint32_t length = wire::parse_length(prefix);
    std::string payload(length, '\0');
    if (!read_exact(reinterpret_cast<std::uint8_t*>(payload.data()), length)) return std::nullopt;
    return nlohmann::json::parse(payload);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flarebench wire-protocol worker"};
    std::vector<double> car_box_vals;
    ReferenceDetectorConfig ref_cfg;
    std::string misbehave;
    app.add_option("--car-box", car_box_vals, "target box x_min,y_min,x_max,y_max")->delimiter(',')->expected(4);
    app.add_option("--c-clear", ref_cfg.c_clear, "clear-scene confidence");
    app.add_option("--gamma", ref_cfg.gamma, "flare sensitivity");
    app.add_option("--saturation-level", ref_cfg.saturation_level, "saturation threshold");
    app.add_option("--dilation", ref_cfg.dilation, "box dilation in pixels");
    app.add_option("--misbehave", misbehave, "test mode: stall | truncate | short-prefix | garbage")
        ->check(CLI::IsMember({"stall", "truncate", "short-prefix", "garbage"}));
    CLI11_PARSE(app, argc, argv);

    std::optional<ReferenceDetector> detector;
    if (car_box_vals.size() == 4)
        detector.emplace(ref_cfg,
                         BoundingBox{car_box_vals[0], car_box_vals[1], car_box_vals[2], car_box_vals[3]});

    while (true) {
        const auto msg = read_message();
        if (!msg) return 0;  // stdin closed
        const std::string type = msg->value("type", "");

        if (type == "hello") {
            if (!write_all(wire::frame_message(wire::make_capabilities({"car"})))) return 1;
            continue;
        }

        if (!misbehave.empty()) {
            if (misbehave == "stall") {
                std::this_thread::sleep_for(std::chrono::seconds(3600));
                return 0;
            }
            if (misbehave == "truncate") {
                // Claim 100 bytes, deliver 10, hang up.
                std::string bogus;
                const std::uint32_t n = 100;
                bogus.push_back(static_cast<char>((n >> 24) & 0xff));
                bogus.push_back(static_cast<char>((n >> 16) & 0xff));
                bogus.push_back(static_cast<char>((n >> 8) & 0xff));
                bogus.push_back(static_cast<char>(n & 0xff));
                bogus += "0123456789";
                write_all(bogus);
                return 0;
            }
            if (misbehave == "short-prefix") {
                write_all(std::string("\x00\x01", 2));
                return 0;
            }
            // garbage: well-framed payload that is not JSON.
            const std::string junk = "not json!!";
            std::string framed;
            const auto n = static_cast<std::uint32_t>(junk.size());
            framed.push_back(static_cast<char>((n >> 24) & 0xff));
            framed.push_back(static_cast<char>((n >> 16) & 0xff));
            framed.push_back(static_cast<char>((n >> 8) & 0xff));
            framed.push_back(static_cast<char>(n & 0xff));
            framed += junk;
            write_all(framed);
            return 0;
        }

        if (type == "detect") {
            if (!detector) {
                std::fprintf(stderr, "detect requested but no --car-box configured\n");
                return 1;
            }
            const Frame frame = wire::frame_from_json(msg->at("frame"));
            const auto dets = detector->detect(frame);
            if (!write_all(wire::frame_message(wire::make_detections_response(dets)))) return 1;
        } else if (type == "denoise") {
            const Frame frame = wire::frame_from_json(msg->at("frame"));
            if (!write_all(wire::frame_message(wire::make_frame_response(chroma_clamp_denoise(frame))))) return 1;
        } else {
            std::fprintf(stderr, "unknown message type '%s'\n", type.c_str());
            return 1;
        }
    }
}
