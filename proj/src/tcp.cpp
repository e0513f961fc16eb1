#include "coinami/net/tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstring>
#include <stdexcept>

namespace coinami::net {

namespace {

void send_all(int fd, std::string_view data) {
    size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n <= 0) throw std::runtime_error("socket send failed");
        off += static_cast<size_t>(n);
    }
}

void set_recv_timeout(int fd, int seconds) {
    timeval tv{};
    tv.tv_sec = seconds;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

sockaddr_in make_addr(const std::string& host, uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    const char* h = host.empty() ? "0.0.0.0" : host.c_str();
    if (::inet_pton(AF_INET, h, &addr.sin_addr) != 1)
        throw std::invalid_argument("bad IPv4 address: " + host);
    return addr;
}

}  // namespace

std::pair<std::string, uint16_t> split_host_port(const std::string& addr) {
    size_t colon = addr.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("address needs host:port");
    std::string host = addr.substr(0, colon);
    std::string_view port_s = std::string_view(addr).substr(colon + 1);
    uint16_t port{};
    auto [ptr, ec] = std::from_chars(port_s.data(), port_s.data() + port_s.size(), port);
    if (ec != std::errc{} || ptr != port_s.data() + port_s.size())
        throw std::invalid_argument("bad port in address: " + addr);
    return {host.empty() ? "127.0.0.1" : host, port};
}

TcpClient::TcpClient(const std::string& host, uint16_t port) {
    connect_to(host, port);
}

TcpClient::TcpClient(const std::string& addr) {
    auto [host, port] = split_host_port(addr);
    connect_to(host, port);
}

void TcpClient::connect_to(const std::string& host, uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw std::runtime_error("socket() failed");
    sockaddr_in addr = make_addr(host, port);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw std::runtime_error("connect to " + host + ":" + std::to_string(port) + " failed");
    }
    set_recv_timeout(fd_, 120);
}

TcpClient::~TcpClient() {
    if (fd_ >= 0) ::close(fd_);
}

kv::Doc TcpClient::request(const kv::Doc& doc) {
    send_all(fd_, encode_frame(doc.render()));
    char buf[16384];
    while (true) {
        if (auto payload = parser_.next()) return kv::Doc::parse(*payload);
        ssize_t n = ::recv(fd_, buf, sizeof(buf), 0);
        if (n <= 0) throw std::runtime_error("connection closed before response");
        parser_.feed(std::string_view(buf, static_cast<size_t>(n)));
    }
}

TcpServer::TcpServer(const std::string& host, uint16_t port,
                     std::function<kv::Doc(const kv::Doc&)> handler)
    : handler_(std::move(handler)) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr = make_addr(host, port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(listen_fd_);
        throw std::runtime_error("bind to " + host + ":" + std::to_string(port) + " failed");
    }
    if (::listen(listen_fd_, 64) != 0) {
        ::close(listen_fd_);
        throw std::runtime_error("listen failed");
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    accept_thread_ = std::thread([this] { accept_loop(); });
}

TcpServer::~TcpServer() {
    stop();
}

void TcpServer::stop() {
    bool expected = false;
    if (!stopping_.compare_exchange_strong(expected, true)) return;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    if (accept_thread_.joinable()) accept_thread_.join();
    // give in-flight connection threads a moment to drain
    for (int i = 0; i < 200 && active_connections_.load() > 0; ++i)
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
}

void TcpServer::accept_loop() {
    while (!stopping_.load()) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (stopping_.load()) return;
            continue;
        }
        active_connections_.fetch_add(1);
        std::thread([this, fd] {
            serve_connection(fd);
            active_connections_.fetch_sub(1);
        }).detach();
    }
}

void TcpServer::serve_connection(int fd) {
    set_recv_timeout(fd, 120);
    FrameParser parser;
    char buf[16384];
    try {
        while (!stopping_.load()) {
            while (auto payload = parser.next()) {
                kv::Doc response = handler_(kv::Doc::parse(*payload));
                send_all(fd, encode_frame(response.render()));
            }
            ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
            if (n <= 0) break;
            parser.feed(std::string_view(buf, static_cast<size_t>(n)));
        }
    } catch (const std::exception&) {
        // malformed peer traffic; drop the connection
    }
    ::close(fd);
}

}  // namespace coinami::net
