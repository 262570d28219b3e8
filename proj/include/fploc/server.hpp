#ifndef FPLOC_SERVER_HPP
#define FPLOC_SERVER_HPP

#include <atomic>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

#include "fploc/service.hpp"

namespace fploc {

// Line-protocol localization server: one thread per connection, strict
// per-connection request/response ordering, tracking sessions scoped to
// the connection and dropped on disconnect. A SHUTDOWN request (or
// stop()) closes the listener and every live connection.
class TcpServer {
 public:
  // port 0 binds an ephemeral port; see port() after start().
  TcpServer(LocalizationService& service, std::uint16_t port = 0);
  ~TcpServer();

  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  // Bind, listen and spawn the accept loop. Throws StorageError when the
  // socket cannot be set up.
  void start();

  // Idempotent; joins every worker before returning.
  void stop();

  // Block until a SHUTDOWN request arrives, then tear down.
  void run_until_shutdown();

  std::uint16_t port() const { return port_; }

 private:
  void accept_loop();
  void serve_connection(int fd);
  void signal_stop();

  LocalizationService& service_;
  std::uint16_t requested_port_;
  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};

  std::thread accept_thread_;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
  std::vector<int> connection_fds_;
};

}  // namespace fploc

#endif  // FPLOC_SERVER_HPP
