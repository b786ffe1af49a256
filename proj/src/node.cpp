#include "node.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>

#include "synth.hpp"

namespace tg {

std::int64_t epoch_ms()
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

namespace {

constexpr int kAckTimeoutMs = 2000;
constexpr size_t kSinkQueueDepth = 1024;

class ReplayDirSource : public FrameSource {
public:
    explicit ReplayDirSource(const ReplaySource& cfg) : fps_(cfg.fps)
    {
        if (!std::filesystem::is_directory(cfg.path))
            throw std::runtime_error("replay path is not a directory: " + cfg.path.string());
        for (const auto& e : std::filesystem::directory_iterator(cfg.path)) {
            const std::string name = e.path().filename().string();
            if (name.starts_with("frame_") && name.ends_with(".ppm"))
                files_.push_back(e.path());
        }
        std::sort(files_.begin(), files_.end());
        if (files_.empty())
            throw std::runtime_error("no frame_*.ppm files in " + cfg.path.string());
    }

    std::optional<RawFrame> next() override
    {
        if (index_ >= files_.size())
            return std::nullopt;
        return load_ppm(files_[index_++]);
    }

    double fps() const override { return fps_; }

private:
    std::vector<std::filesystem::path> files_;
    size_t index_ = 0;
    double fps_;
};

class SynthFrameSource : public FrameSource {
public:
    explicit SynthFrameSource(const SynthSource& cfg)
        : scene_(standard_scene(cfg.scene)), seed_(cfg.seed), frames_(cfg.frames), fps_(cfg.fps)
    {
        if (frames_ < 1)
            throw std::runtime_error("source.frames must be >= 1");
    }

    std::optional<RawFrame> next() override
    {
        if (index_ >= frames_)
            return std::nullopt;
        return render_frame(scene_, index_++, seed_);
    }

    double fps() const override { return fps_; }

private:
    Scene scene_;
    std::uint64_t seed_;
    int frames_;
    int index_ = 0;
    double fps_;
};

}  // namespace

std::unique_ptr<FrameSource> make_frame_source(const NodeConfig& config)
{
    if (const auto* replay = std::get_if<ReplaySource>(&config.source))
        return std::make_unique<ReplayDirSource>(*replay);
    return std::make_unique<SynthFrameSource>(std::get<SynthSource>(config.source));
}

Node::Node(NodeConfig config) : config_(std::move(config))
{
    status_snapshot_.node_id = config_.node_id;
    status_snapshot_.level = to_string(SafetyLevel::Run);
    start_ = std::chrono::steady_clock::now();

    for (const auto& ep : config_.machines) {
        TcpConn conn;
        for (int attempt = 0; attempt < 20; ++attempt) {
            try {
                conn = TcpConn::connect(ep);
                break;
            } catch (const std::exception&) {
                std::this_thread::sleep_for(std::chrono::milliseconds(100));
            }
        }
        if (!conn.valid())
            throw std::runtime_error("cannot reach machine endpoint " + ep.str());
        machines_.push_back(std::move(conn));
    }

    if (config_.listen) {
        status_listener_ = TcpListener::bind(config_.listen->host, config_.listen->port);
        status_thread_ = std::thread(&Node::status_loop, this);
    }
    if (config_.edge_sink)
        sink_thread_ = std::thread(&Node::sink_loop, this);
}

Node::~Node()
{
    stopping_ = true;
    sink_cv_.notify_all();
    if (sink_thread_.joinable())
        sink_thread_.join();
    if (status_thread_.joinable())
        status_thread_.join();
}

StatusMsg Node::status() const
{
    std::lock_guard lock(status_mutex_);
    StatusMsg s = status_snapshot_;
    s.uptime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start_)
                      .count();
    return s;
}

void Node::send_with_ack_barrier(const SafetyCommandMsg& cmd)
{
    const std::string line = encode(WireMessage{cmd});
    for (size_t i = 0; i < machines_.size(); ++i) {
        machines_[i].send_line(line);
    }
    // No frame is processed past this point until every machine has acked.
    for (size_t i = 0; i < machines_.size(); ++i) {
        const auto deadline =
            std::chrono::steady_clock::now() + std::chrono::milliseconds(kAckTimeoutMs);
        bool acked = false;
        while (!acked) {
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  deadline - std::chrono::steady_clock::now())
                                  .count();
            if (left <= 0)
                break;
            const auto reply = machines_[i].recv_line(static_cast<int>(left));
            if (!reply)
                break;
            try {
                const WireMessage msg = decode_line(*reply);
                if (const auto* ack = std::get_if<AckMsg>(&msg);
                    ack && ack->frame_seq == cmd.frame_seq)
                    acked = true;
            } catch (const WireError&) {
                break;
            }
        }
        if (!acked)
            throw std::runtime_error("machine " + config_.machines[i].str() +
                                     " did not ack frame " + std::to_string(cmd.frame_seq));
    }
}

void Node::attempt_failsafe_stop(std::uint64_t frame_seq)
{
    SafetyCommandMsg cmd;
    cmd.node_id = config_.node_id;
    cmd.frame_seq = frame_seq;
    cmd.level = SafetyLevel::Stop;
    cmd.reason = to_string(SafetyReason::Failsafe);
    const std::string line = encode(WireMessage{cmd});
    for (auto& m : machines_) {
        try {
            m.send_line(line);
            m.recv_line(500);  // best effort, do not block the abort path
        } catch (...) {
        }
    }
}

void Node::enqueue_event(DetectionEvent event)
{
    if (!config_.edge_sink)
        return;
    std::lock_guard lock(sink_mutex_);
    if (sink_queue_.size() >= kSinkQueueDepth)
        sink_queue_.pop_front();  // drop-oldest, never stall the loop
    sink_queue_.push_back(std::move(event));
    sink_cv_.notify_one();
}

void Node::sink_loop()
{
    TcpConn conn;
    for (;;) {
        DetectionEvent event;
        {
            std::unique_lock lock(sink_mutex_);
            sink_cv_.wait(lock, [&] { return stopping_ || !sink_queue_.empty(); });
            if (sink_queue_.empty())
                return;  // stopping and drained
            event = std::move(sink_queue_.front());
            sink_queue_.pop_front();
        }
        if (!conn.valid()) {
            try {
                conn = TcpConn::connect(*config_.edge_sink, 500);
            } catch (...) {
                if (stopping_)
                    return;
                continue;  // sink unreachable, event dropped
            }
        }
        try {
            conn.send_line(encode(WireMessage{event}));
        } catch (...) {
            conn.close();
        }
    }
}

void Node::status_loop()
{
    while (!stopping_) {
        auto conn = status_listener_->accept(100);
        if (!conn)
            continue;
        while (auto line = conn->recv_line(200)) {
            try {
                const WireMessage msg = decode_line(*line);
                if (std::holds_alternative<StatusReqMsg>(msg))
                    conn->send_line(encode(WireMessage{status()}));
                else
                    conn->send_line(encode(WireMessage{ErrorMsg{"expected status_req"}}));
            } catch (const WireError& e) {
                try {
                    conn->send_line(encode(WireMessage{ErrorMsg{e.what()}}));
                } catch (...) {
                    break;
                }
            } catch (...) {
                break;
            }
        }
    }
}

void Node::announce(SafetyLevel level, SafetyReason reason, std::uint64_t frame_seq)
{
    SafetyCommandMsg cmd;
    cmd.node_id = config_.node_id;
    cmd.frame_seq = frame_seq;
    cmd.level = level;
    cmd.reason = to_string(reason);
    send_with_ack_barrier(cmd);
    std::lock_guard lock(status_mutex_);
    ++status_snapshot_.commands;
    status_snapshot_.level = to_string(level);
}

void Node::run(bool fast)
{
    std::unique_ptr<FrameSource> source;
    try {
        source = make_frame_source(config_);
    } catch (const std::exception& e) {
        attempt_failsafe_stop(0);
        throw FailsafeError(std::string("frame source failure: ") + e.what());
    }
    const GaussianKernel kernel =
        build_kernel(config_.detector.kernel_size, config_.detector.kernel_sigma);
    MotionDetectorState motion{config_.detector.motion, std::nullopt};
    SafetyState safety;

    // Startup announcement so machines know the node is alive and at RUN.
    try {
        announce(SafetyLevel::Run, SafetyReason::Clear, 0);
    } catch (const std::exception& e) {
        attempt_failsafe_stop(0);
        throw FailsafeError(std::string("ack barrier failed: ") + e.what());
    }

    const auto frame_period =
        std::chrono::duration<double>(fast ? 0.0 : 1.0 / source->fps());
    auto next_tick = std::chrono::steady_clock::now();
    std::uint64_t seq = 0;

    for (;;) {
        std::optional<RawFrame> raw;
        try {
            raw = source->next();
        } catch (const std::exception& e) {
            attempt_failsafe_stop(seq);
            throw FailsafeError(std::string("frame source failure: ") + e.what());
        }
        if (!raw)
            break;
        ++seq;

        const GrayFrame gray = preprocess(*raw, kernel);
        const Detection det = hybrid_step(motion, gray, config_.detector.roi, seq);
        const Occupancy occ = zone_occupancy(det, config_.policy);
        const auto transition = safety_step(safety, occ, config_.safety, config_.policy);

        if (transition) {
            SafetyCommandMsg cmd;
            cmd.node_id = config_.node_id;
            cmd.frame_seq = seq;
            cmd.level = transition->level;
            cmd.reason = to_string(transition->reason);
            try {
                send_with_ack_barrier(cmd);
            } catch (const std::exception& e) {
                attempt_failsafe_stop(seq);
                throw FailsafeError(std::string("ack barrier failed: ") + e.what());
            }
        }

        DetectionEvent event;
        event.node_id = config_.node_id;
        event.frame_seq = seq;
        event.ts_ms = epoch_ms();
        event.method_a = det.method_a.positive;
        event.method_b = det.method_b.positive;
        event.positive = det.positive;
        for (int q = 0; q < 4; ++q)
            if (det.method_b.quadrant_flags[q])
                event.quadrants.push_back(q);
        event.active_pixels = det.method_a.active_pixel_count;
        enqueue_event(std::move(event));

        {
            std::lock_guard lock(status_mutex_);
            status_snapshot_.frame_seq = seq;
            status_snapshot_.frames = seq;
            if (det.positive)
                ++status_snapshot_.positives;
            if (transition) {
                ++status_snapshot_.commands;
                status_snapshot_.level = to_string(transition->level);
            }
        }

        if (frame_period.count() > 0) {
            next_tick += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                frame_period);
            std::this_thread::sleep_until(next_tick);
        }
    }
}

MachineSim::MachineSim(const std::string& host, int port, std::string machine_id,
                       std::filesystem::path log_path)
    : listener_(TcpListener::bind(host, port)),
      machine_id_(std::move(machine_id)),
      log_path_(std::move(log_path))
{
    FILE* f = std::fopen(log_path_.string().c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot open machine log " + log_path_.string());
    std::fputs("ts_ms,frame_seq,level,reason\n", f);
    std::fclose(f);
}

void MachineSim::run()
{
    while (!stop_) {
        auto conn = listener_.accept(100);
        if (!conn)
            continue;
        workers_.emplace_back(&MachineSim::serve_connection, this, std::move(*conn));
    }
    for (auto& w : workers_)
        if (w.joinable())
            w.join();
    workers_.clear();
}

void MachineSim::serve_connection(TcpConn conn)
{
    while (!stop_) {
        const auto line = conn.recv_line(100);
        if (!line) {
            if (!conn.valid())
                return;
            continue;
        }
        WireMessage msg;
        try {
            msg = decode_line(*line);
        } catch (const WireError& e) {
            try {
                conn.send_line(encode(WireMessage{ErrorMsg{e.what()}}));
            } catch (...) {
                return;
            }
            continue;
        }

        try {
            if (const auto* cmd = std::get_if<SafetyCommandMsg>(&msg)) {
                {
                    std::lock_guard lock(state_mutex_);
                    if (static_cast<std::int64_t>(cmd->frame_seq) <= last_seq_) {
                        std::cerr << "machine " << machine_id_ << ": ignoring stale command seq "
                                  << cmd->frame_seq << " (last " << last_seq_ << ")\n";
                    } else {
                        last_seq_ = static_cast<std::int64_t>(cmd->frame_seq);
                        level_ = cmd->level;
                        FILE* f = std::fopen(log_path_.string().c_str(), "a");
                        if (f) {
                            std::fprintf(f, "%lld,%llu,%s,%s\n",
                                         static_cast<long long>(epoch_ms()),
                                         static_cast<unsigned long long>(cmd->frame_seq),
                                         to_string(cmd->level), cmd->reason.c_str());
                            std::fclose(f);
                        }
                    }
                }
                conn.send_line(encode(WireMessage{AckMsg{cmd->frame_seq}}));
            } else if (std::holds_alternative<HbMsg>(msg)) {
                conn.send_line(encode(WireMessage{HbMsg{}}));
            } else {
                conn.send_line(encode(WireMessage{ErrorMsg{"unexpected message type"}}));
            }
        } catch (...) {
            return;
        }
    }
}

}  // namespace tg
