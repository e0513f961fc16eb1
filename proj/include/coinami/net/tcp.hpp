#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>

#include "coinami/kv.hpp"
#include "coinami/net/frame.hpp"

namespace coinami::net {

/// "host:port" -> (host, port); throws std::invalid_argument.
std::pair<std::string, uint16_t> split_host_port(const std::string& addr);

/// Blocking request/response client speaking framed documents.
class TcpClient {
  public:
    TcpClient(const std::string& host, uint16_t port);
    explicit TcpClient(const std::string& addr);
    ~TcpClient();
    TcpClient(const TcpClient&) = delete;
    TcpClient& operator=(const TcpClient&) = delete;

    kv::Doc request(const kv::Doc& doc);

  private:
    void connect_to(const std::string& host, uint16_t port);
    int fd_ = -1;
    FrameParser parser_;
};

/// One request document per frame; the handler's response is framed
/// back on the same connection. Connections are served on their own
/// threads; the handler must be thread-safe.
class TcpServer {
  public:
    TcpServer(const std::string& host, uint16_t port,
              std::function<kv::Doc(const kv::Doc&)> handler);
    ~TcpServer();

    uint16_t port() const { return port_; }
    void stop();

  private:
    void accept_loop();
    void serve_connection(int fd);

    std::function<kv::Doc(const kv::Doc&)> handler_;
    int listen_fd_ = -1;
    uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::atomic<int> active_connections_{0};
    std::thread accept_thread_;
};

}  // namespace coinami::net
