#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <thread>

#include "config.hpp"
#include "wire.hpp"

namespace tg {

// Raised when the node aborts through the failsafe path (source failure or
// machine ack timeout). A failsafe STOP has already been attempted.
struct FailsafeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class FrameSource {
public:
    virtual ~FrameSource() = default;
    // nullopt at end of stream; throws on acquisition failure.
    virtual std::optional<RawFrame> next() = 0;
    virtual double fps() const = 0;
};

std::unique_ptr<FrameSource> make_frame_source(const NodeConfig& config);

// The mist node: one sequential loop over acquire -> preprocess -> detect ->
// zones -> safety, with an ack barrier on safety commands. Frame pixels never
// leave the process; only detection events and safety commands go on the wire.
class Node {
public:
    explicit Node(NodeConfig config);
    ~Node();

    // Blocks until the frame source is exhausted. Throws FailsafeError on
    // failsafe abort. Pass fast=true to ignore the source fps (tests).
    void run(bool fast = false);

    StatusMsg status() const;

private:
    void announce(SafetyLevel level, SafetyReason reason, std::uint64_t frame_seq);
    void send_with_ack_barrier(const SafetyCommandMsg& cmd);
    void attempt_failsafe_stop(std::uint64_t frame_seq);
    void enqueue_event(DetectionEvent event);
    void sink_loop();
    void status_loop();

    NodeConfig config_;
    std::vector<TcpConn> machines_;

    mutable std::mutex status_mutex_;
    StatusMsg status_snapshot_;
    std::chrono::steady_clock::time_point start_;

    std::deque<DetectionEvent> sink_queue_;
    std::mutex sink_mutex_;
    std::condition_variable sink_cv_;
    std::atomic<bool> stopping_{false};
    std::thread sink_thread_;
    std::thread status_thread_;
    std::optional<TcpListener> status_listener_;
};

// Simulated robot controller: accepts NDJSON connections, applies safety
// commands, logs them, and acks. Commands with stale frame_seq are ignored
// (but still acked so the sender is not blocked).
class MachineSim {
public:
    // port 0 picks an ephemeral port, see port().
    MachineSim(const std::string& host, int port, std::string machine_id,
               std::filesystem::path log_path);

    int port() const { return listener_.bound_port(); }
    SafetyLevel level() const { return level_; }

    // Serves until request_stop() is called from another thread.
    void run();
    void request_stop() { stop_ = true; }

private:
    void serve_connection(TcpConn conn);

    TcpListener listener_;
    std::string machine_id_;
    std::filesystem::path log_path_;
    std::atomic<bool> stop_{false};
    std::atomic<SafetyLevel> level_{SafetyLevel::Run};
    std::int64_t last_seq_ = -1;
    std::mutex state_mutex_;
    std::vector<std::thread> workers_;
};

std::int64_t epoch_ms();

}  // namespace tg
