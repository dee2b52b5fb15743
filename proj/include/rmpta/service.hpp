// Copyright 2026 The rmpta Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "rmpta/protocol.hpp"
#include "rmpta/scenario.hpp"
#include "rmpta/sim.hpp"
#include "rmpta/trace.hpp"

namespace rmpta {

struct ServiceOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 0;  // 0 picks a free port
  std::string trace_path;   // empty: keep the session trace in memory only
  double max_duration = -1.0;  // negative: scenario value
  bool stop_when_complete = true;
  int broadcast_every = 2;  // ticks
  std::chrono::milliseconds deadman{250};
  // Wait each tick for the operator's reply to the latest state instead of pacing by wall clock.
  bool lockstep = false;
  std::chrono::milliseconds lockstep_timeout{2000};
};

StateFrame make_state_frame(const EpisodeRunner& runner);

class TeleopService {
 public:
  TeleopService(const Scenario& scenario, ServiceOptions options);
  ~TeleopService();
  TeleopService(const TeleopService&) = delete;
  TeleopService& operator=(const TeleopService&) = delete;

  /// Binds and starts accepting clients. Throws PortBusy.
  void start();
  [[nodiscard]] unsigned short port() const;

  /// Runs the episode on the calling thread, then closes clients and writes the trace.
  EpisodeTrace run_session();

  /// Ends a running session at the next tick; safe from any thread.
  void stop();

  [[nodiscard]] std::size_t client_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rmpta
