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

// A stand-in for the browser harness: connects to a bridge and answers
// invoke frames with the native step implementations.

#ifndef WASMFLOW_TESTS_SUPPORT_FAKE_HARNESS_H_
#define WASMFLOW_TESTS_SUPPORT_FAKE_HARNESS_H_

#include <sys/socket.h>

#include <atomic>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include <boost/asio/buffers_iterator.hpp>
#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "wasmflow/protocol/frames.h"
#include "wasmflow/steps/steps.h"

namespace wasmflow::test {

class FakeHarness {
 public:
  struct Options {
    // Close the connection instead of answering the n-th invoke (1-based);
    // 0 never drops.
    int drop_at_invoke = 0;
    // Never answer invoke frames.
    bool silent = false;
  };

  FakeHarness(int port, Options options) : options_(options) {
    thread_ = std::thread([this, port] { Serve(port); });
  }
  explicit FakeHarness(int port) : FakeHarness(port, Options{}) {}

  ~FakeHarness() {
    stop_ = true;
    {
      // Unblocks a pending read; shutdown(2) is safe against a concurrent
      // blocking call where closing the asio socket is not.
      std::lock_guard<std::mutex> lock(mu_);
      if (ws_.next_layer().is_open()) ::shutdown(ws_.next_layer().native_handle(), SHUT_RDWR);
    }
    thread_.join();
  }

  int invocations() const { return invocations_.load(); }
  int resets() const { return resets_.load(); }

 private:
  using Stream = boost::beast::websocket::stream<boost::asio::ip::tcp::socket>;

  void Serve(int port) {
    namespace net = boost::asio;
    Stream* ws = &ws_;
    boost::beast::error_code ec;
    net::ip::tcp::endpoint endpoint(net::ip::make_address("127.0.0.1"), port);
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (stop_) return;
      ws->next_layer().connect(endpoint, ec);
    }
    if (ec) return;
    ws->binary(true);
    ws->read_message_max(512u << 20);
    ws->handshake("127.0.0.1:" + std::to_string(port), "/", ec);
    if (ec) return;
    std::set<std::string> warm;
    while (!stop_) {
      boost::beast::flat_buffer buffer;
      ws->read(buffer, ec);
      if (ec) break;
      auto data = buffer.data();
      Bytes message(net::buffers_begin(data), net::buffers_end(data));
      auto op = protocol::PeekOp(message);
      if (!op.ok()) continue;
      if (*op == "invoke") {
        int n = ++invocations_;
        if (options_.drop_at_invoke == n) {
          ::shutdown(ws->next_layer().native_handle(), SHUT_RDWR);
          break;
        }
        if (options_.silent) continue;
        auto invoke = protocol::DecodeInvokeFrame(message);
        if (!invoke.ok()) continue;
        auto result = protocol::DecodeResultFrame(steps::HandleInvoke(message));
        if (!result.ok()) continue;
        const std::string step = protocol::StepIdName(invoke->step_id);
        const bool cold = warm.insert(step).second;
        result->run_id = invoke->run_id;
        result->step_id = invoke->step_id;
        result->instance = cold ? protocol::InstanceState::kCold : protocol::InstanceState::kWarm;
        protocol::PhaseBreakdown phases;
        phases.compile_us = cold ? 1000 : 0;
        phases.execute_us = 10;
        result->phase_breakdown = phases;
        result->total_us = phases.Sum();
        Bytes out = protocol::EncodeFrame(*result);
        ws->write(net::buffer(out), ec);
      } else {
        auto control = protocol::DecodeControlFrame(message);
        if (!control.ok()) continue;
        if (control->op == "reset") {
          warm.clear();
          ++resets_;
        }
        ws->write(net::buffer(message), ec);
      }
      if (ec) break;
    }
  }

  const Options options_;
  boost::asio::io_context ioc_;
  Stream ws_{ioc_};
  std::mutex mu_;
  std::thread thread_;
  std::atomic<bool> stop_{false};
  std::atomic<int> invocations_{0};
  std::atomic<int> resets_{0};
};

}  // namespace wasmflow::test

#endif  // WASMFLOW_TESTS_SUPPORT_FAKE_HARNESS_H_
