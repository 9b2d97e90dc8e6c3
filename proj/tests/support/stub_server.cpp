// Copyright 2026 The utiljudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stub_server.hpp"

namespace uj::testing {

StubServer::StubServer() = default;

StubServer::~StubServer() {
  server_.stop();
  if (thread_.joinable()) thread_.join();
}

void StubServer::post(const std::string& path, Handler handler) {
  server_.Post(path, std::move(handler));
}

void StubServer::start() {
  port_ = server_.bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_.listen_after_bind(); });
  server_.wait_until_ready();
}

std::string StubServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

}  // namespace uj::testing
