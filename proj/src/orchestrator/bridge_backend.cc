// Copyright 2026 The wasmflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wasmflow/orchestrator/bridge_backend.h"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <future>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "wasmflow/common/errors.h"

namespace wasmflow::orchestrator {
namespace {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = boost::beast::websocket;
using tcp = net::ip::tcp;

using Reply = absl::StatusOr<Bytes>;

absl::Status Unavailable(std::string_view detail) {
  return MakeError(absl::StatusCode::kUnavailable, error_kind::kBackendUnavailable, detail);
}

struct Session {
  explicit Session(tcp::socket socket, uint64_t id) : ws(std::move(socket)), id(id) {}

  websocket::stream<beast::tcp_stream> ws;
  beast::flat_buffer buffer;
  std::deque<std::shared_ptr<const Bytes>> outbox;  // io thread only
  const uint64_t id;
};

std::string InvokeKey(const std::string& run_id, protocol::StepRef step) {
  return "invoke|" + run_id + "|" + protocol::StepIdName(step);
}

std::string ControlKey(const std::string& op, const std::string& run_id) {
  return "control|" + op + "|" + run_id;
}

}  // namespace

struct BridgeBackend::Impl {
  struct Pending {
    uint64_t session_id = 0;
    std::shared_ptr<std::promise<Reply>> promise;
  };

  Impl(std::string name, std::chrono::milliseconds timeout, std::chrono::milliseconds connect_wait)
      : name(std::move(name)), timeout(timeout), connect_wait(connect_wait), acceptor(ioc) {}

  void DoAccept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec != net::error::operation_aborted) DoAccept();
        return;
      }
      auto session = std::make_shared<Session>(std::move(socket), ++next_session_id);
      session->ws.binary(true);
      session->ws.read_message_max(kBridgeMaxMessageBytes);
      session->ws.async_accept([this, session](beast::error_code ec) {
        if (ec) return;
        std::shared_ptr<Session> old;
        {
          std::lock_guard<std::mutex> lock(mu);
          old = current;
          current = session;
        }
        cv.notify_all();
        if (old) Drop(old, "harness connection replaced by a newer one");
        DoRead(session);
      });
      DoAccept();
    });
  }

  void DoRead(const std::shared_ptr<Session>& session) {
    session->ws.async_read(session->buffer, [this, session](beast::error_code ec, size_t) {
      if (ec) {
        Drop(session, "harness connection lost: " + ec.message());
        return;
      }
      auto data = session->buffer.data();
      Bytes message(net::buffers_begin(data), net::buffers_end(data));
      session->buffer.consume(session->buffer.size());
      Dispatch(std::move(message));
      DoRead(session);
    });
  }

  void DoWrite(const std::shared_ptr<Session>& session) {
    const Bytes& front = *session->outbox.front();
    session->ws.async_write(net::buffer(front), [this, session](beast::error_code ec, size_t) {
      if (ec) {
        Drop(session, "harness write failed: " + ec.message());
        return;
      }
      session->outbox.pop_front();
      if (!session->outbox.empty()) DoWrite(session);
    });
  }

  void Send(std::shared_ptr<Session> session, std::shared_ptr<const Bytes> message) {
    net::post(ioc, [this, session = std::move(session), message = std::move(message)] {
      session->outbox.push_back(message);
      if (session->outbox.size() == 1) DoWrite(session);
    });
  }

  // Routes an inbound frame to the caller waiting for it.
  void Dispatch(Bytes message) {
    auto op = protocol::PeekOp(message);
    if (!op.ok()) {
      std::cerr << "bridge: dropping undecodable message from harness\n";
      return;
    }
    std::string key;
    if (*op == "result") {
      auto result = protocol::DecodeResultFrame(message);
      if (!result.ok() || !result->run_id || !result->step_id) {
        std::cerr << "bridge: dropping result frame without run_id/step_id\n";
        return;
      }
      key = InvokeKey(*result->run_id, *result->step_id);
    } else {
      auto control = protocol::DecodeControlFrame(message);
      if (!control.ok()) return;
      key = ControlKey(control->op, control->run_id);
    }
    Complete(key, std::move(message));
  }

  void Complete(const std::string& key, Reply reply) {
    std::shared_ptr<std::promise<Reply>> promise;
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = pending.find(key);
      if (it == pending.end()) return;  // late reply to a timed-out request
      promise = std::move(it->second.promise);
      pending.erase(it);
    }
    promise->set_value(std::move(reply));
  }

  // Closes `session` and fails every request still waiting on it.
  void Drop(const std::shared_ptr<Session>& session, const std::string& reason) {
    std::vector<std::shared_ptr<std::promise<Reply>>> orphans;
    {
      std::lock_guard<std::mutex> lock(mu);
      if (current == session) current.reset();
      for (auto it = pending.begin(); it != pending.end();) {
        if (it->second.session_id == session->id) {
          orphans.push_back(std::move(it->second.promise));
          it = pending.erase(it);
        } else {
          ++it;
        }
      }
    }
    beast::error_code ignored;
    beast::get_lowest_layer(session->ws).socket().close(ignored);
    for (auto& promise : orphans) promise->set_value(Unavailable(reason));
  }

  // Sends `message` and waits for the reply registered under `key`.
  Reply Request(const std::string& key, Bytes message) {
    auto promise = std::make_shared<std::promise<Reply>>();
    std::future<Reply> future = promise->get_future();
    std::shared_ptr<Session> session;
    {
      std::lock_guard<std::mutex> lock(mu);
      session = current;
      if (!session) return Unavailable("no harness connected to bridge '" + name + "'");
      if (pending.count(key)) {
        return absl::AlreadyExistsError("request already in flight: " + key);
      }
      pending[key] = Pending{session->id, promise};
    }
    Send(session, std::make_shared<const Bytes>(std::move(message)));
    if (future.wait_for(timeout) != std::future_status::ready) {
      std::lock_guard<std::mutex> lock(mu);
      pending.erase(key);
      return MakeError(absl::StatusCode::kDeadlineExceeded, error_kind::kTimeout,
                       "no reply from harness for " + key);
    }
    return future.get();
  }

  const std::string name;
  const std::chrono::milliseconds timeout;
  const std::chrono::milliseconds connect_wait;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::thread io_thread;
  uint64_t next_session_id = 0;  // io thread only
  std::atomic<uint64_t> next_control_id{0};
  int port = 0;

  std::mutex mu;
  std::condition_variable cv;
  std::shared_ptr<Session> current;        // guarded by mu
  std::map<std::string, Pending> pending;  // guarded by mu
};

absl::StatusOr<std::unique_ptr<BridgeBackend>> BridgeBackend::Listen(
    std::string name, const std::string& host, int port, std::chrono::milliseconds timeout,
    std::chrono::milliseconds connect_wait) {
  auto impl = std::make_unique<Impl>(std::move(name), timeout, connect_wait);
  beast::error_code ec;
  tcp::resolver resolver(impl->ioc);
  auto endpoints = resolver.resolve(host, std::to_string(port), ec);
  if (ec || endpoints.empty()) {
    return MakeError(absl::StatusCode::kUnavailable, error_kind::kConnectFailed,
                     "cannot resolve bridge address " + host + ": " + ec.message());
  }
  tcp::endpoint endpoint = endpoints.begin()->endpoint();
  impl->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl->acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) impl->acceptor.bind(endpoint, ec);
  if (!ec) impl->acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    return MakeError(absl::StatusCode::kUnavailable, error_kind::kConnectFailed,
                     "cannot listen on " + host + ":" + std::to_string(port) + ": " + ec.message());
  }
  impl->port = impl->acceptor.local_endpoint().port();
  impl->DoAccept();
  Impl* raw = impl.get();
  impl->io_thread = std::thread([raw] { raw->ioc.run(); });
  return std::unique_ptr<BridgeBackend>(new BridgeBackend(std::move(impl)));
}

BridgeBackend::BridgeBackend(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

BridgeBackend::~BridgeBackend() {
  net::post(impl_->ioc, [impl = impl_.get()] {
    beast::error_code ignored;
    impl->acceptor.close(ignored);
    std::shared_ptr<Session> session;
    {
      std::lock_guard<std::mutex> lock(impl->mu);
      session = impl->current;
    }
    if (session) impl->Drop(session, "bridge shutting down");
    impl->ioc.stop();
  });
  impl_->io_thread.join();
}

int BridgeBackend::port() const { return impl_->port; }

std::string BridgeBackend::Name() const { return impl_->name; }

absl::Status BridgeBackend::WaitForPeer(std::chrono::milliseconds wait) {
  std::unique_lock<std::mutex> lock(impl_->mu);
  if (!impl_->cv.wait_for(lock, wait, [this] { return impl_->current != nullptr; })) {
    return Unavailable("no harness connected to bridge '" + impl_->name + "' within " +
                       std::to_string(wait.count()) + " ms");
  }
  return absl::OkStatus();
}

absl::StatusOr<ResultFrame> BridgeBackend::Invoke(const InvokeFrame& frame,
                                                  const InvocationSettings& /*settings*/) {
  // The harness chooses its own engine; settings only label the cell.
  auto reply = impl_->Request(InvokeKey(frame.run_id, frame.step_id), protocol::EncodeFrame(frame));
  if (!reply.ok()) return reply.status();
  auto result = protocol::DecodeResultFrame(*reply);
  if (!result.ok()) return Unavailable("undecodable result from harness");
  return result;
}

absl::Status BridgeBackend::ResetPool() {
  protocol::ControlFrame control{"reset", "reset-" + std::to_string(++impl_->next_control_id)};
  auto reply = impl_->Request(ControlKey(control.op, control.run_id), protocol::EncodeFrame(control));
  return reply.status();
}

absl::Status BridgeBackend::Health() { return WaitForPeer(impl_->connect_wait); }

}  // namespace wasmflow::orchestrator
