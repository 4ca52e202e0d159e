#pragma once

#include <chrono>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "fedshield/wire.hpp"

namespace fedshield::transport {

// Bidirectional framed-message channel. The in-memory flavour lives with the
// simulation scheduler; this header provides the socket flavour.
class Link {
public:
    virtual ~Link() = default;
    virtual bool send(const wire::Message& m) = 0;
    virtual std::optional<wire::Message> recv(std::chrono::milliseconds timeout) = 0;
};

namespace detail {

inline bool read_exact(int fd, std::uint8_t* buf, std::size_t len,
                       std::chrono::milliseconds timeout) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + timeout;
    std::size_t got = 0;
    while (got < len) {
        const auto remain =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
        if (remain.count() <= 0) return false;
        pollfd pfd{fd, POLLIN, 0};
        const int pr = ::poll(&pfd, 1, static_cast<int>(remain.count()));
        if (pr <= 0) return false;
        const ssize_t n = ::recv(fd, buf + got, len - got, 0);
        if (n <= 0) return false;
        got += static_cast<std::size_t>(n);
    }
    return true;
}

inline bool write_all(int fd, const std::uint8_t* buf, std::size_t len) {
    std::size_t sent = 0;
    while (sent < len) {
        const ssize_t n = ::send(fd, buf + sent, len - sent, MSG_NOSIGNAL);
        if (n <= 0) return false;
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

} // namespace detail

class TcpLink final : public Link {
public:
    explicit TcpLink(int fd) : fd_(fd) {
        int one = 1;
        ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    }
    TcpLink(const TcpLink&) = delete;
    TcpLink& operator=(const TcpLink&) = delete;
    ~TcpLink() override { close(); }

    bool send(const wire::Message& m) override {
        if (fd_ < 0) return false;
        const Bytes frame = wire::encode_frame(m);
        return detail::write_all(fd_, frame.data(), frame.size());
    }

    std::optional<wire::Message> recv(std::chrono::milliseconds timeout) override {
        if (fd_ < 0) return std::nullopt;
        std::uint8_t head[5];
        if (!detail::read_exact(fd_, head, 5, timeout)) return std::nullopt;
        auto header = wire::decode_frame_header(head);
        if (!header) return std::nullopt;
        Bytes payload(header->length);
        if (!detail::read_exact(fd_, payload.data(), payload.size(), timeout))
            return std::nullopt;
        auto j = nlohmann::json::parse(payload.begin(), payload.end(), nullptr, false);
        if (j.is_discarded()) return std::nullopt;
        return wire::message_from_json(j);
    }

    void close() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

    // Detach the descriptor (caller takes ownership).
    int release_fd() {
        const int fd = fd_;
        fd_ = -1;
        return fd;
    }

    bool open() const { return fd_ >= 0; }

private:
    int fd_;
};

// Loopback listener; port 0 picks an ephemeral port, readable afterwards.
class TcpListener {
public:
    explicit TcpListener(std::uint16_t port) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_ < 0) throw std::runtime_error("tcp: socket() failed");
        int one = 1;
        ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = htons(port);
        if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
            ::listen(fd_, 64) != 0) {
            ::close(fd_);
            throw std::runtime_error("tcp: bind/listen failed on port " + std::to_string(port));
        }
        socklen_t len = sizeof(addr);
        ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
    }
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    ~TcpListener() {
        if (fd_ >= 0) ::close(fd_);
    }

    std::uint16_t port() const { return port_; }

    // nullopt on timeout
    std::optional<int> accept(std::chrono::milliseconds timeout) {
        pollfd pfd{fd_, POLLIN, 0};
        const int pr = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
        if (pr <= 0) return std::nullopt;
        const int cfd = ::accept(fd_, nullptr, nullptr);
        if (cfd < 0) return std::nullopt;
        return cfd;
    }

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

inline int tcp_connect(std::uint16_t port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("tcp: socket() failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw std::runtime_error("tcp: connect to 127.0.0.1:" + std::to_string(port) + " failed");
    }
    return fd;
}

} // namespace fedshield::transport
