#include "flarebench/ppm.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace flarebench {
namespace {

// Reads the next PNM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

}  // namespace

void write_ppm(const std::filesystem::path& path, const Frame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "P6\n" << frame.width() << " " << frame.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.pixels().data()),
              static_cast<std::streamsize>(frame.pixels().size()));
    if (!out) throw IoError("write failed: " + path.string());
}

Frame read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());

    if (next_token(in) != "P6") throw IoError("not a binary PPM (P6): " + path.string());
    int width = 0, height = 0, maxval = 0;
    try {
        width = std::stoi(next_token(in));
        height = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw IoError("malformed PPM header: " + path.string());
    }
    if (width < 1 || height < 1) throw IoError("bad PPM dimensions: " + path.string());
    if (maxval != 255) throw IoError("unsupported PPM maxval (want 255): " + path.string());

    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(3) * width * height);
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(pixels.size()))
        throw IoError("truncated PPM payload: " + path.string());
    return Frame(width, height, std::move(pixels));
}

std::string frame_filename(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06lld.ppm", static_cast<long long>(index));
    return buf;
}

void save_sequence(const std::filesystem::path& dir, const VideoSequence& seq) {
    seq.validate();
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < seq.frames.size(); ++i)
        write_ppm(dir / frame_filename(static_cast<std::int64_t>(i)), seq.frames[i]);

    nlohmann::json manifest = {
        {"fps", seq.fps},
        {"width", seq.width()},
        {"height", seq.height()},
        {"count", seq.frames.size()},
    };
    std::ofstream out(dir / "manifest.json");
    if (!out) throw IoError("cannot write manifest.json in " + dir.string());
    out << manifest.dump(2) << "\n";
}

VideoSequence load_sequence(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("missing manifest.json in " + dir.string());
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad manifest.json: " + std::string(e.what()));
    }
    if (!manifest.contains("fps") || !manifest.contains("count"))
        throw IoError("manifest.json must contain fps and count");

    VideoSequence seq;
    seq.fps = manifest.at("fps").get<double>();
    const auto count = manifest.at("count").get<std::int64_t>();
    seq.frames.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        Frame f = read_ppm(dir / frame_filename(i));
        f.set_index(i);
        f.set_timestamp_ms(frame_timestamp_ms(i, seq.fps));
        seq.frames.push_back(std::move(f));
    }
    seq.validate();
    return seq;
}

}  // namespace flarebench
