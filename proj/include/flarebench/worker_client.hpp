#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flarebench/detector.hpp"
#include "flarebench/types.hpp"

namespace flarebench {

/// Resolves the worker response timeout: explicit value, else the
/// FLAREBENCH_WORKER_TIMEOUT_MS environment variable, else 1000 ms.
int resolve_worker_timeout_ms(std::optional<int> explicit_ms = std::nullopt);

/// Client for one worker subprocess speaking the length-prefixed JSON
/// protocol over stdin/stdout. Single-owner: not shareable across threads.
class WorkerClient final : public DetectorBackend {
public:
    /// Spawns the worker and performs the hello/capabilities handshake.
    explicit WorkerClient(std::vector<std::string> command, std::optional<int> timeout_ms = std::nullopt);
    ~WorkerClient() override;

    WorkerClient(const WorkerClient&) = delete;
    WorkerClient& operator=(const WorkerClient&) = delete;

    Capabilities capabilities() const override;
    std::vector<Detection> detect(const Frame& frame) override;
    Frame denoise(const Frame& frame);

    int timeout_ms() const { return timeout_ms_; }

private:
    void send(const std::string& framed);
    std::string receive();

    std::vector<std::string> command_;
    Capabilities caps_;
    int timeout_ms_ = 1000;
    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
};

}  // namespace flarebench
