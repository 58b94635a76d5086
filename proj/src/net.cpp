#include "eprsim/net.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <thread>
#include <unistd.h>

namespace eprsim::net {

namespace {

std::string errno_text() { return std::strerror(errno); }

sockaddr_in resolve(const std::string& host, int port) {
  if (port <= 0 || port > 65535) {
    throw NetError("invalid port " + std::to_string(port));
  }
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    throw NetError("cannot resolve host " + host);
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return addr;
}

bool wait_readable(int fd, Millis timeout) {
  pollfd p{fd, POLLIN, 0};
  for (;;) {
    const int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) throw NetError("poll failed: " + errno_text());
    return rc > 0;
  }
}

}  // namespace

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.release();
  }
  return *this;
}

Socket::~Socket() {
  if (fd_ >= 0) ::close(fd_);
}

int Socket::release() {
  const int fd = fd_;
  fd_ = -1;
  return fd;
}

Listener::Listener(const std::string& host, int port)
    : host_(host), port_(port) {
  const sockaddr_in addr = resolve(host, port);
  sock_ = Socket(::socket(AF_INET, SOCK_STREAM, 0));
  if (!sock_.valid()) throw NetError("socket: " + errno_text());
  const int one = 1;
  ::setsockopt(sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(sock_.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    throw NetError("bind " + host + ":" + std::to_string(port) + ": " + errno_text());
  }
  if (::listen(sock_.fd(), 8) != 0) {
    throw NetError("listen " + host + ":" + std::to_string(port) + ": " + errno_text());
  }
}

Socket Listener::accept(Millis timeout) {
  if (!wait_readable(sock_.fd(), timeout)) {
    throw NetError("timed out waiting for a connection on " + host_ + ":" +
                   std::to_string(port_));
  }
  const int fd = ::accept(sock_.fd(), nullptr, nullptr);
  if (fd < 0) throw NetError("accept on port " + std::to_string(port_) + ": " + errno_text());
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return Socket(fd);
}

Socket connect_with_retry(const std::string& host, int port, Millis timeout,
                          std::string_view peer) {
  const sockaddr_in addr = resolve(host, port);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::string last;
  for (;;) {
    Socket s(::socket(AF_INET, SOCK_STREAM, 0));
    if (!s.valid()) throw NetError("socket: " + errno_text());
    if (::connect(s.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr) == 0) {
      const int one = 1;
      ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return s;
    }
    last = errno_text();
    if (std::chrono::steady_clock::now() >= deadline) break;
    std::this_thread::sleep_for(Millis(20));
  }
  throw NetError("cannot connect to " + std::string(peer) + " at " + host + ":" +
                 std::to_string(port) + ": " + last);
}

bool LineChannel::fill() {
  if (eof_) return false;
  char buf[65536];
  for (;;) {
    const ssize_t n = ::read(sock_.fd(), buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) throw NetError("read from " + peer_ + ": " + errno_text());
    if (n == 0) {
      eof_ = true;
      return false;
    }
    buffer_.append(buf, static_cast<std::size_t>(n));
    return true;
  }
}

bool LineChannel::has_buffered_line() const {
  return buffer_.find('\n') != std::string::npos;
}

std::optional<std::string> LineChannel::pop_line() {
  const std::size_t nl = buffer_.find('\n');
  if (nl == std::string::npos) {
    if (eof_ && !buffer_.empty()) {
      throw NetError("connection from " + peer_ + " closed mid-line");
    }
    return std::nullopt;
  }
  std::string line = buffer_.substr(0, nl);
  buffer_.erase(0, nl + 1);
  return line;
}

std::optional<std::string> LineChannel::read_line(Millis timeout) {
  for (;;) {
    if (auto line = pop_line()) return line;
    if (eof_) return std::nullopt;
    if (!wait_readable(sock_.fd(), timeout)) {
      throw NetError("timed out reading from " + peer_);
    }
    fill();
  }
}

namespace {

void send_fully(int fd, std::string_view data, const std::string& peer) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) throw NetError("write to " + peer + ": " + errno_text());
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

// Buffered lines go out first so writes stay in call order.
void LineChannel::write_all(std::string_view data) {
  flush();
  send_fully(sock_.fd(), data, peer_);
}

void LineChannel::send_line(std::string_view line) {
  outbound_ += line;
  if (outbound_.size() >= 32 * 1024) flush();
}

void LineChannel::flush() {
  if (outbound_.empty()) return;
  send_fully(sock_.fd(), outbound_, peer_);
  outbound_.clear();
}

}  // namespace eprsim::net
