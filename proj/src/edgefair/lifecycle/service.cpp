// SPDX-License-Identifier: Apache-2.0
/*
Copyright (C) 2026 The edgefair Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.

*/

#include "edgefair/lifecycle/service.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <openssl/err.h>
#include <openssl/ssl.h>
#include <openssl/x509.h>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <deque>
#include <iostream>
#include <list>
#include <thread>

#include "edgefair/core/error.hpp"
#include "edgefair/lifecycle/protocol.hpp"

namespace edgefair {

namespace {

constexpr int kPollMs = 100;
constexpr std::size_t kMaxLine = 64 * 1024;

void log_line(const std::string& msg) { std::cerr << "edgefair: " << msg << '\n'; }

std::string openssl_error() {
  char buf[256];
  const auto code = ERR_get_error();
  if (code == 0) return "unknown TLS error";
  ERR_error_string_n(code, buf, sizeof buf);
  return buf;
}

struct SslCtxDeleter {
  void operator()(SSL_CTX* ctx) const { SSL_CTX_free(ctx); }
};
struct SslDeleter {
  void operator()(SSL* ssl) const { SSL_free(ssl); }
};

class Fd {
public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() { reset(); }
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    reset();
    fd_ = std::exchange(o.fd_, -1);
    return *this;
  }
  int get() const noexcept { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

private:
  int fd_ = -1;
};

std::pair<std::string, std::string> split_host_port(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "listen", "expected host:port, got '" + listen + "'");
  auto host = listen.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']')
    host = host.substr(1, host.size() - 2);
  return {host, listen.substr(colon + 1)};
}

Fd bind_listener(const std::string& listen, int& bound_port) {
  const auto [host, port] = split_host_port(listen);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), port.c_str(), &hints, &res); rc != 0)
    throw Error(ErrorCode::Io, listen, gai_strerror(rc));
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, ::freeaddrinfo);
  for (auto* ai = res; ai; ai = ai->ai_next) {
    Fd fd(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (fd.get() < 0) continue;
    int one = 1;
    ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd.get(), ai->ai_addr, ai->ai_addrlen) != 0) continue;
    if (::listen(fd.get(), 64) != 0) continue;
    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    ::getsockname(fd.get(), reinterpret_cast<sockaddr*>(&addr), &len);
    bound_port = addr.ss_family == AF_INET6
                     ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
                     : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
    return fd;
  }
  throw Error(ErrorCode::Io, listen, "cannot bind listener");
}

ClientId peer_identity(SSL* ssl, const sockaddr_storage& addr) {
  ClientId id;
  if (X509* cert = SSL_get1_peer_certificate(ssl)) {
    char cn[256] = {};
    const int n = X509_NAME_get_text_by_NID(X509_get_subject_name(cert), NID_commonName, cn, sizeof cn);
    if (n > 0) id.name.assign(cn, static_cast<std::size_t>(n));
    X509_free(cert);
  }
  char host[INET6_ADDRSTRLEN] = {};
  if (addr.ss_family == AF_INET6) {
    const auto* a = reinterpret_cast<const sockaddr_in6*>(&addr);
    ::inet_ntop(AF_INET6, &a->sin6_addr, host, sizeof host);
    id.port = ntohs(a->sin6_port);
  } else {
    const auto* a = reinterpret_cast<const sockaddr_in*>(&addr);
    ::inet_ntop(AF_INET, &a->sin_addr, host, sizeof host);
    id.port = ntohs(a->sin_port);
  }
  id.address = host;
  return id;
}

} // namespace

struct Service::Impl {
  struct Session {
    std::string client;
    std::mutex mu;
    std::deque<std::string> outbox;

    void post(std::string line) {
      std::lock_guard lock(mu);
      outbox.push_back(std::move(line));
    }
    std::deque<std::string> take() {
      std::lock_guard lock(mu);
      return std::exchange(outbox, {});
    }
  };

  explicit Impl(ServiceOptions opts)
      : options(std::move(opts)),
        config(validate_config(options.config)),
        store(options.db_path.empty() ? Store::kInMemory : options.db_path),
        executor(options.cores,
                 [profile = options.job_profile,
                  cap = seconds(config.max_job_duration_s)](const JobRecord&) {
                   auto p = profile;
                   p.duration = std::min(p.duration, cap);
                   return p;
                 }),
        node(store, config, executor),
        clock(ClockMode::Wall) {
    init_tls();
    listener = bind_listener(options.listen, bound_port);
    node.set_notifier([this](const std::string& client, const Response& r) {
      std::lock_guard lock(sessions_mu);
      for (const auto& s : sessions)
        if (s->client == client) s->post(protocol::encode_response(r));
    });
  }

  void init_tls() {
    ctx.reset(SSL_CTX_new(TLS_server_method()));
    if (!ctx) throw Error(ErrorCode::Io, "tls", openssl_error());
    SSL_CTX_set_min_proto_version(ctx.get(), TLS1_2_VERSION);
    if (SSL_CTX_use_certificate_chain_file(ctx.get(), options.cert_file.c_str()) != 1)
      throw Error(ErrorCode::Io, options.cert_file, "cannot load certificate: " + openssl_error());
    if (SSL_CTX_use_PrivateKey_file(ctx.get(), options.key_file.c_str(), SSL_FILETYPE_PEM) != 1)
      throw Error(ErrorCode::Io, options.key_file, "cannot load private key: " + openssl_error());
    if (SSL_CTX_check_private_key(ctx.get()) != 1)
      throw Error(ErrorCode::Io, options.key_file, "key does not match certificate");
    if (SSL_CTX_load_verify_locations(ctx.get(), options.ca_file.c_str(), nullptr) != 1)
      throw Error(ErrorCode::Io, options.ca_file, "cannot load CA: " + openssl_error());
    SSL_CTX_set_verify(ctx.get(), SSL_VERIFY_PEER | SSL_VERIFY_FAIL_IF_NO_PEER_CERT, nullptr);
  }

  void accept_loop(std::stop_token stop) {
    while (!stop.stop_requested()) {
      pollfd pfd{listener.get(), POLLIN, 0};
      if (::poll(&pfd, 1, kPollMs) <= 0) continue;
      sockaddr_storage addr{};
      socklen_t len = sizeof addr;
      Fd conn(::accept(listener.get(), reinterpret_cast<sockaddr*>(&addr), &len));
      if (conn.get() < 0) continue;
      std::lock_guard lock(threads_mu);
      reap_sessions();
      auto done = std::make_shared<std::atomic<bool>>(false);
      std::jthread t([this, c = std::move(conn), addr, done](std::stop_token st) mutable {
        serve_connection(std::move(c), addr, st);
        *done = true;
      });
      session_threads.push_back({std::move(t), std::move(done)});
    }
  }

  // Joins sessions whose connection has closed. Caller holds threads_mu.
  void reap_sessions() {
    std::erase_if(session_threads, [](const SessionThread& s) { return s.done->load(); });
  }

  void serve_connection(Fd conn, sockaddr_storage addr, std::stop_token stop) {
    timeval tv{5, 0};
    ::setsockopt(conn.get(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    std::unique_ptr<SSL, SslDeleter> ssl(SSL_new(ctx.get()));
    if (!ssl) return;
    SSL_set_fd(ssl.get(), conn.get());
    if (SSL_accept(ssl.get()) != 1) {
      ERR_clear_error();
      return;  // unauthenticated: closed without a response
    }
    const auto client = peer_identity(ssl.get(), addr);
    if (client.name.empty()) return;

    auto session = std::make_shared<Session>();
    session->client = client.name;
    {
      std::lock_guard lock(sessions_mu);
      sessions.push_back(session);
    }

    std::string buffer;
    char chunk[4096];
    bool open = true;
    while (open && !stop.stop_requested()) {
      for (auto& line : session->take())
        if (!write_line(ssl.get(), line)) open = false;
      if (!open) break;

      if (SSL_pending(ssl.get()) == 0) {
        pollfd pfd{conn.get(), POLLIN, 0};
        if (::poll(&pfd, 1, kPollMs) <= 0) continue;
      }
      const int n = SSL_read(ssl.get(), chunk, sizeof chunk);
      if (n <= 0) {
        const int err = SSL_get_error(ssl.get(), n);
        if (err == SSL_ERROR_WANT_READ || err == SSL_ERROR_WANT_WRITE) continue;
        break;
      }
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = buffer.find('\n')) != std::string::npos) {
        auto line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const Request req{client, protocol::parse_request(line)};
        const auto resp = node.handle_request(req, clock.now());
        if (!write_line(ssl.get(), protocol::encode_response(resp))) open = false;
      }
      if (buffer.size() > kMaxLine) break;
    }
    SSL_shutdown(ssl.get());
    std::lock_guard lock(sessions_mu);
    sessions.remove(session);
  }

  static bool write_line(SSL* ssl, const std::string& line) {
    const std::string framed = line + '\n';
    return SSL_write(ssl, framed.data(), static_cast<int>(framed.size())) > 0;
  }

  void scheduler_loop(std::stop_token stop) {
    while (clock.sleep_for(options.tick_interval, stop)) {
      const auto now = clock.now();
      node.reap_exited(now);
      try {
        node.schedule_ready(now);
      } catch (const Error& e) {
        log_line(std::string("scheduling failed: ") + e.what());
      }
    }
  }

  ServiceOptions options;
  SchedulerConfig config;
  Store store;
  SimulatedExecutor executor;
  Node node;
  Clock clock;
  std::unique_ptr<SSL_CTX, SslCtxDeleter> ctx;
  Fd listener;
  int bound_port = 0;

  std::mutex sessions_mu;
  std::list<std::shared_ptr<Session>> sessions;

  struct SessionThread {
    std::jthread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };
  std::mutex threads_mu;
  std::vector<SessionThread> session_threads;
  std::vector<std::jthread> workers;
  bool running = false;
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() { stop(); }

void Service::start() {
  if (impl_->running) return;
  impl_->running = true;
  // A client hanging up mid-write must surface as a write error, not kill
  // the process.
  std::signal(SIGPIPE, SIG_IGN);
  auto& im = *impl_;
  im.workers.emplace_back([&im](std::stop_token st) { im.accept_loop(st); });
  im.workers.emplace_back([&im](std::stop_token st) { im.scheduler_loop(st); });
  im.workers.emplace_back([&im](std::stop_token st) { run_monitor_loop(im.node, im.clock, st); });
}

void Service::stop() {
  if (!impl_ || !impl_->running) return;
  impl_->running = false;
  for (auto& t : impl_->workers) t.request_stop();
  impl_->workers.clear();
  std::vector<Impl::SessionThread> sessions;
  {
    std::lock_guard lock(impl_->threads_mu);
    sessions.swap(impl_->session_threads);
  }
  for (auto& s : sessions) s.thread.request_stop();
  sessions.clear();
}

int Service::port() const noexcept { return impl_->bound_port; }
Node& Service::node() noexcept { return impl_->node; }
Store& Service::store() noexcept { return impl_->store; }

} // namespace edgefair
