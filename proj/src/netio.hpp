#pragma once

#include <optional>
#include <string>

namespace tg {

struct Endpoint {
    std::string host;
    int port = 0;

    std::string str() const { return host + ":" + std::to_string(port); }
};

// "host:port" -> Endpoint; throws on malformed input.
Endpoint parse_endpoint(const std::string& s);

// Thin RAII wrappers over POSIX TCP sockets; line-oriented (NDJSON transport).
class TcpConn {
public:
    TcpConn() = default;
    explicit TcpConn(int fd) : fd_(fd) {}
    TcpConn(TcpConn&& other) noexcept;
    TcpConn& operator=(TcpConn&& other) noexcept;
    TcpConn(const TcpConn&) = delete;
    TcpConn& operator=(const TcpConn&) = delete;
    ~TcpConn();

    static TcpConn connect(const Endpoint& ep, int timeout_ms = 2000);

    bool valid() const { return fd_ >= 0; }
    void close();

    // Appends '\n' to the line. Throws on a broken connection.
    void send_line(const std::string& line);
    // Reads up to the next '\n'. Returns nullopt on timeout or peer close.
    std::optional<std::string> recv_line(int timeout_ms);

private:
    int fd_ = -1;
    std::string buffer_;
};

class TcpListener {
public:
    TcpListener() = default;
    TcpListener(TcpListener&&) noexcept;
    TcpListener& operator=(TcpListener&&) noexcept;
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    ~TcpListener();

    // port 0 binds an ephemeral port; bound_port() reports the actual one.
    static TcpListener bind(const std::string& host, int port);

    int bound_port() const { return port_; }
    // Returns nullopt on timeout.
    std::optional<TcpConn> accept(int timeout_ms);
    void close();

private:
    int fd_ = -1;
    int port_ = 0;
};

}  // namespace tg
