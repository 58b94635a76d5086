#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

// Minimal blocking TCP with line framing, enough for the role processes.
namespace eprsim::net {

class NetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Millis = std::chrono::milliseconds;

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release();

 private:
  int fd_ = -1;
};

class Listener {
 public:
  /// Binds with SO_REUSEADDR. Throws NetError naming host:port.
  Listener(const std::string& host, int port);

  /// Throws NetError on timeout.
  Socket accept(Millis timeout);

  int port() const { return port_; }

 private:
  Socket sock_;
  std::string host_;
  int port_;
};

/// Retries refused connections until the deadline, then throws NetError with
/// `peer` in the message.
Socket connect_with_retry(const std::string& host, int port, Millis timeout,
                          std::string_view peer);

/// Buffered '\n'-framed reads and whole-line writes over one socket.
class LineChannel {
 public:
  LineChannel(Socket sock, std::string peer)
      : sock_(std::move(sock)), peer_(std::move(peer)) {}

  /// Next complete line without its '\n'; nullopt on orderly EOF. Throws
  /// NetError on timeout or a truncated final line.
  std::optional<std::string> read_line(Millis timeout);

  /// One read() into the buffer; false on EOF. Use after poll() says the
  /// socket is readable.
  bool fill();
  std::optional<std::string> pop_line();
  bool has_buffered_line() const;

  void write_all(std::string_view data);

  /// Appends to an outbound buffer, flushing once it passes 32 KiB.
  void send_line(std::string_view line);
  void flush();

  int fd() const { return sock_.fd(); }
  const std::string& peer() const { return peer_; }
  void set_peer(std::string peer) { peer_ = std::move(peer); }

 private:
  Socket sock_;
  std::string peer_;
  std::string buffer_;
  std::string outbound_;
  bool eof_ = false;
};

}  // namespace eprsim::net
