#include "flarebench/worker_client.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "flarebench/wire.hpp"

namespace flarebench {

namespace {

constexpr std::uint32_t kMaxMessageBytes = 256u << 20;

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    return left < 0 ? 0 : static_cast<int>(left);
}

}  // namespace

int resolve_worker_timeout_ms(std::optional<int> explicit_ms) {
    if (explicit_ms) return *explicit_ms;
    if (const char* env = std::getenv("FLAREBENCH_WORKER_TIMEOUT_MS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return 1000;
}

WorkerClient::WorkerClient(std::vector<std::string> command, std::optional<int> timeout_ms)
    : command_(std::move(command)), timeout_ms_(resolve_worker_timeout_ms(timeout_ms)) {
    if (command_.empty()) throw InvalidArgument("worker command must not be empty");
    ::signal(SIGPIPE, SIG_IGN);

    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) throw WorkerCrashed("pipe() failed");

    const int pid = ::fork();
    if (pid < 0) throw WorkerCrashed("fork() failed");
    if (pid == 0) {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        std::vector<char*> argv;
        argv.reserve(command_.size() + 1);
        for (auto& arg : command_) argv.push_back(arg.data());
        argv.push_back(nullptr);
        ::execvp(argv[0], argv.data());
        ::_exit(127);
    }

    child_pid_ = pid;
    to_child_ = to_child[1];
    from_child_ = from_child[0];
    ::close(to_child[0]);
    ::close(from_child[1]);

    send(wire::frame_message(wire::make_hello()));
    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(receive());
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("capabilities reply is not valid JSON: ") + e.what());
    }
    if (reply.value("type", "") != "capabilities" || !reply.contains("classes") || !reply["classes"].is_array())
        throw ProtocolError("expected {type: capabilities, classes: [...]}");
    caps_.name = command_.front();
    for (const auto& cls : reply["classes"]) caps_.classes.push_back(cls.get<std::string>());
}

WorkerClient::~WorkerClient() {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    if (child_pid_ > 0) {
        int status = 0;
        // Give the worker a moment to exit on stdin EOF, then make sure.
        for (int i = 0; i < 50; ++i) {
            if (::waitpid(child_pid_, &status, WNOHANG) != 0) return;
            ::usleep(2000);
        }
        ::kill(child_pid_, SIGKILL);
        ::waitpid(child_pid_, &status, 0);
    }
}

Capabilities WorkerClient::capabilities() const { return caps_; }

void WorkerClient::send(const std::string& framed) {
    std::size_t off = 0;
    while (off < framed.size()) {
        const ssize_t n = ::write(to_child_, framed.data() + off, framed.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw WorkerCrashed(std::string("write to worker failed: ") + std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

std::string WorkerClient::receive() {
    const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms_);
    // Returns bytes read; stops early on EOF. Throws on timeout or IO error.
    auto read_upto = [&](std::uint8_t* dst, std::size_t want) -> std::size_t {
        std::size_t got = 0;
        while (got < want) {
            struct pollfd pfd{from_child_, POLLIN, 0};
            const int pr = ::poll(&pfd, 1, remaining_ms(deadline));
            if (pr == 0) throw WorkerTimeout("worker did not respond within " + std::to_string(timeout_ms_) + " ms");
            if (pr < 0) {
                if (errno == EINTR) continue;
                throw WorkerCrashed(std::string("poll failed: ") + std::strerror(errno));
            }
            const ssize_t n = ::read(from_child_, dst + got, want - got);
            if (n == 0) return got;
            if (n < 0) {
                if (errno == EINTR) continue;
                throw WorkerCrashed(std::string("read from worker failed: ") + std::strerror(errno));
            }
            got += static_cast<std::size_t>(n);
        }
        return got;
    };

    std::uint8_t prefix[4];
    const std::size_t prefix_got = read_upto(prefix, 4);
    if (prefix_got == 0) throw WorkerCrashed("worker closed its output stream");
    if (prefix_got < 4) throw ProtocolError("truncated length prefix");
    const std::uint32_t length = wire::parse_length(prefix);
    if (length == 0 || length > kMaxMessageBytes)
        throw ProtocolError("message length " + std::to_string(length) + " out of range");
    std::string payload(length, '\0');
    if (read_upto(reinterpret_cast<std::uint8_t*>(payload.data()), length) < length)
        throw ProtocolError("truncated message: stream ended before " + std::to_string(length) + " bytes");
    return payload;
}

std::vector<Detection> WorkerClient::detect(const Frame& frame) {
    send(wire::frame_message(wire::make_detect_request(frame)));
    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(receive());
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("detect reply is not valid JSON: ") + e.what());
    }
    if (reply.value("type", "") != "detections" || !reply.contains("items"))
        throw ProtocolError("expected {type: detections, items: [...]}");
    return wire::detections_from_json(reply["items"]);
}

Frame WorkerClient::denoise(const Frame& frame) {
    send(wire::frame_message(wire::make_denoise_request(frame)));
    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(receive());
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("denoise reply is not valid JSON: ") + e.what());
    }
    if (reply.value("type", "") != "frame" || !reply.contains("frame"))
        throw ProtocolError("expected {type: frame, frame: {...}}");
    return wire::frame_from_json(reply["frame"]);
}

}  // namespace flarebench
