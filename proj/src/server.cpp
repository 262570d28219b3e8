#include "fploc/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <string>

namespace fploc {

namespace {

// A single request line longer than this is answered with an error and
// discarded, which bounds per-connection memory under garbage input.
constexpr std::size_t kMaxLineLength = 1 << 20;

bool send_all(int fd, std::string_view data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent,
                             MSG_NOSIGNAL);
    if (n <= 0) {
      return false;
    }
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

TcpServer::TcpServer(LocalizationService& service, std::uint16_t port)
    : service_(service), requested_port_(port) {}

TcpServer::~TcpServer() { stop(); }

void TcpServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) {
    throw StorageError("server: socket() failed: " +
                       std::string(std::strerror(errno)));
  }
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(requested_port_);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw StorageError("server: bind() failed: " +
                       std::string(std::strerror(errno)));
  }
  if (::listen(listen_fd_, 16) != 0) {
    throw StorageError("server: listen() failed: " +
                       std::string(std::strerror(errno)));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);

  accept_thread_ = std::thread([this] { accept_loop(); });
}

void TcpServer::accept_loop() {
  while (!stopping_.load()) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_.load() || errno != EINTR) {
        break;
      }
      continue;
    }
    std::lock_guard lock(workers_mutex_);
    if (stopping_.load()) {
      ::close(fd);
      break;
    }
    connection_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void TcpServer::serve_connection(int fd) {
  TrackSession session;
  std::string buffer;
  bool discarding = false;  // inside an over-long line
  char chunk[4096];

  while (!stopping_.load()) {
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) {
      break;
    }
    std::size_t begin = 0;
    for (ssize_t i = 0; i < n; ++i) {
      if (chunk[i] != '\n') {
        continue;
      }
      buffer.append(chunk + begin, chunk + i);
      begin = static_cast<std::size_t>(i) + 1;

      std::string response;
      bool shutdown = false;
      if (discarding) {
        response = format_error("request line too long");
        discarding = false;
      } else {
        if (!buffer.empty() && buffer.back() == '\r') {
          buffer.pop_back();
        }
        response = handle_request_line(service_, session, buffer, shutdown);
      }
      buffer.clear();
      const bool sent = send_all(fd, response + "\n");
      if (shutdown) {
        signal_stop();
      }
      if (!sent || shutdown) {
        ::close(fd);
        return;
      }
    }
    buffer.append(chunk + begin, chunk + static_cast<std::size_t>(n));
    if (buffer.size() > kMaxLineLength) {
      buffer.clear();
      discarding = true;
    }
  }
  ::close(fd);
}

// Unblocks the accept loop and every connection read. Join happens in
// stop(), never on a worker thread.
void TcpServer::signal_stop() {
  if (stopping_.exchange(true)) {
    return;
  }
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
  }
  std::lock_guard lock(workers_mutex_);
  for (int fd : connection_fds_) {
    ::shutdown(fd, SHUT_RDWR);
  }
}

void TcpServer::stop() {
  signal_stop();
  if (accept_thread_.joinable()) {
    accept_thread_.join();
  }
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mutex_);
    workers.swap(workers_);
    connection_fds_.clear();
  }
  for (std::thread& worker : workers) {
    if (worker.joinable()) {
      worker.join();
    }
  }
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

void TcpServer::run_until_shutdown() {
  using namespace std::chrono_literals;
  while (!stopping_.load()) {
    std::this_thread::sleep_for(50ms);
  }
  stop();
}

}  // namespace fploc
