#pragma once

#include <filesystem>
#include <string>

#include "flarebench/types.hpp"

namespace flarebench {

/// Binary PPM (P6, maxval 255) codec. The on-disk baseline format for frames.
void write_ppm(const std::filesystem::path& path, const Frame& frame);
Frame read_ppm(const std::filesystem::path& path);

/// A sequence on disk is a directory of frame_000000.ppm ... plus manifest.json
/// with {fps, width, height, count}.
void save_sequence(const std::filesystem::path& dir, const VideoSequence& seq);
VideoSequence load_sequence(const std::filesystem::path& dir);

std::string frame_filename(std::int64_t index);

}  // namespace flarebench
