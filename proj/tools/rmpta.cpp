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

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>

#include "rmpta/config.hpp"
#include "rmpta/harness.hpp"
#include "rmpta/service.hpp"
#include "rmpta/sim.hpp"
#include "rmpta/trace.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kEpisodeFailure = 1;
constexpr int kConfigFailure = 2;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

int completed_tasks(const rmpta::EpisodeMetrics& m) {
  int n = 0;
  for (const auto& t : m.tasks) n += t.completion.has_value();
  return n;
}

int cmd_run(const std::string& config, const std::string& kind, int seeds, const std::string& out,
            double noise_std, const std::string& replay) {
  const rmpta::ScenarioParams params = rmpta::load_config(config);
  rmpta::OperatorModel model = rmpta::PerfectOperator{};
  if (kind == "noisy") {
    model = rmpta::NoisyOperator{noise_std};
  } else if (kind == "idle") {
    model = rmpta::IdleOperator{};
  } else if (kind == "replay") {
    if (replay.empty()) throw rmpta::ConfigParse("--replay TRACE is required with --operator replay");
    model = rmpta::replay_from_trace(rmpta::load_trace(replay));
  }
  const rmpta::BatchResult result = rmpta::run_batch(params, model, seeds, out);
  for (const auto& e : result.episodes) {
    std::printf("seed %llu: %d/%zu tasks completed, effort %.3f\n",
                static_cast<unsigned long long>(e.seed), completed_tasks(e), e.tasks.size(), e.effort);
  }
  for (const auto seed : result.diverged) {
    std::printf("seed %llu: diverged\n", static_cast<unsigned long long>(seed));
  }
  std::printf("summary: %s\n", result.summary.string().c_str());
  return result.ok() ? kOk : kEpisodeFailure;
}

int cmd_summarize(const std::string& dir) {
  const auto path = rmpta::summarize_traces(dir);
  std::printf("summary: %s\n", path.string().c_str());
  return kOk;
}

int cmd_validate(const std::string& config) {
  const rmpta::ScenarioParams params = rmpta::load_config(config);
  const rmpta::Scenario scenario(params);
  std::printf("%s: ok (%d targets, %d mission policies, %zu safety policies)\n", config.c_str(),
              scenario.task_count(), scenario.mission_count(), scenario.safety().size());
  return kOk;
}

int cmd_serve(const std::string& config, unsigned short port, const std::string& address,
              const std::string& trace, double duration) {
  const rmpta::Scenario scenario(rmpta::load_config(config));
  rmpta::ServiceOptions options;
  options.address = address;
  options.port = port;
  options.trace_path = trace;
  options.max_duration = duration;
  rmpta::TeleopService service(scenario, options);
  service.start();
  std::printf("listening on ws://%s:%u\n", address.c_str(), service.port());
  std::fflush(stdout);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done) {
      if (g_interrupted) service.stop();
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });
  int code = kOk;
  try {
    const rmpta::EpisodeTrace session = service.run_session();
    std::printf("session ended after %.2f s, trace: %s\n", session.duration(),
                trace.empty() ? "(not written)" : trace.c_str());
  } catch (const rmpta::Diverged& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    code = kEpisodeFailure;
  }
  done = true;
  watcher.join();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-adaptive motion policies on a simulated cylinder inspection"};
  app.require_subcommand(1);

  std::string config;
  std::string kind = "perfect";
  int seeds = 1;
  std::string out = "runs";
  double noise_std = 0.2;
  std::string replay;
  auto* run = app.add_subcommand("run", "Run a batch of episodes and write traces plus a summary");
  run->add_option("--config", config, "Scenario config")->required();
  run->add_option("--operator", kind, "Operator model")
      ->check(CLI::IsMember({"perfect", "noisy", "idle", "replay"}));
  run->add_option("--seeds", seeds, "Number of seeded episodes")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Output directory");
  run->add_option("--noise-std", noise_std, "Noisy operator standard deviation")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--replay", replay, "Trace whose inputs the replay operator plays back");

  std::string traces;
  auto* summarize = app.add_subcommand("summarize", "Recompute summary.csv from a trace directory");
  summarize->add_option("--traces", traces, "Trace directory")->required();

  unsigned short port = 8765;
  std::string address = "127.0.0.1";
  std::string session_trace = "session.jsonl";
  double duration = -1.0;
  auto* serve = app.add_subcommand("serve", "Run one live episode over websocket");
  serve->add_option("--config", config, "Scenario config")->required();
  serve->add_option("--port", port, "Listen port");
  serve->add_option("--address", address, "Listen address");
  serve->add_option("--trace", session_trace, "Session trace output");
  serve->add_option("--duration", duration, "Episode length in seconds (default from config)");

  auto* validate = app.add_subcommand("validate", "Check a scenario config");
  validate->add_option("--config", config, "Scenario config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    if (*run) return cmd_run(config, kind, seeds, out, noise_std, replay);
    if (*summarize) return cmd_summarize(traces);
    if (*serve) return cmd_serve(config, port, address, session_trace, duration);
    if (*validate) return cmd_validate(config);
  } catch (const rmpta::ConfigParse& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigFailure;
  } catch (const rmpta::BadParams& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kEpisodeFailure;
  }
  return kOk;
}
