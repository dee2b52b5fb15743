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

#include "rmpta/service.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <condition_variable>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace rmpta {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kMaxQueuedFrames = 64;

std::string roll_text(RollMode m) { return m == RollMode::kHorizontal ? "horizontal" : "vertical"; }

}  // namespace

StateFrame make_state_frame(const EpisodeRunner& runner) {
  const Scenario& sc = runner.scenario();
  const RobotState& s = runner.state();
  const auto frame = sc.cylinder().frame<double>(s.pose.position, s.pose.orientation.toRotationMatrix());
  const LikelihoodReport& rep = runner.report();
  auto list = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };

  StateFrame out;
  out.t = s.time;
  out.pose = pose_array(s.pose);
  out.surface_coords = {frame.height, frame.arc, frame.tool_roll};
  const Vector6d tw = s.twist.stacked();
  for (int i = 0; i < 6; ++i) out.twist[static_cast<std::size_t>(i)] = tw(i);
  out.alpha = list(runner.alpha().alpha);
  out.likelihood = list(rep.combined);
  out.conditional = list(rep.conditional);
  out.prior = list(rep.prior);
  out.active_target = runner.active_task();
  for (int k = 0; k < sc.task_count(); ++k) {
    out.target_list.push_back({pose_array(sc.target_pose(k)), sc.targets()[static_cast<std::size_t>(k)].mode});
  }
  out.distance_to_surface = frame.distance;
  return out;
}

struct TeleopService::Impl {
  class Session;

  const Scenario& scenario;
  ServiceOptions options;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  std::thread io_thread;
  std::optional<net::executor_work_guard<net::io_context::executor_type>> work;

  // io-thread only
  std::vector<std::shared_ptr<Session>> sessions;
  Session* operator_session = nullptr;
  int instruction_target = -2;

  std::atomic<std::size_t> clients{0};
  std::atomic<bool> stopping{false};
  std::atomic<int> active_task{0};

  // Single-slot input mailbox, last write wins.
  std::mutex mailbox_mutex;
  std::condition_variable mailbox_cv;
  std::optional<InputFrame> latest;
  Clock::time_point received{};
  std::int64_t last_sequence = std::numeric_limits<std::int64_t>::min();

  std::mutex meta_mutex;
  std::map<std::string, std::string> client_meta;
  int client_serial = 0;

  Impl(const Scenario& s, ServiceOptions o) : scenario(s), options(std::move(o)) {}

  void deposit(const InputFrame& f) {
    {
      std::lock_guard lock(mailbox_mutex);
      if (f.sequence <= last_sequence) return;  // out of order
      last_sequence = f.sequence;
      latest = f;
      received = Clock::now();
    }
    mailbox_cv.notify_all();
  }

  void remember_client(const std::string& key, const std::string& value) {
    std::lock_guard lock(meta_mutex);
    client_meta[key] = value;
  }

  InstructionFrame instruction() const {
    const int task = active_task.load();
    InstructionFrame f;
    f.target = task;
    if (task >= 0) {
      f.mode = scenario.targets().at(static_cast<std::size_t>(task)).mode;
      f.text = "inspect target " + std::to_string(task + 1) + " with " + roll_text(f.mode) + " tool rotation";
    } else {
      f.text = "all targets inspected";
    }
    return f;
  }

  void accept();
  void drop(Session* s);
  void broadcast(std::shared_ptr<const std::string> msg);
};

class TeleopService::Impl::Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, Impl& svc, int serial)
      : ws_(std::move(socket)), svc_(svc), serial_(serial) {}

  void run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->svc_.drop(self.get());
      self->open_ = true;
      self->read();
    });
  }

  void send(std::shared_ptr<const std::string> msg) {
    if (!open_) return;
    if (queue_.size() >= kMaxQueuedFrames) {
      // Drop the oldest frame not already being written.
      queue_.erase(queue_.begin() + (writing_ ? 1 : 0));
    }
    queue_.push_back(std::move(msg));
    if (!writing_) write();
  }

  void close() {
    if (!open_) return;
    open_ = false;
    ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
  }

  [[nodiscard]] bool is_operator() const { return operator_; }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->svc_.drop(self.get());
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      try {
        self->handle(decode(text));
      } catch (const MalformedFrame&) {
        self->protocol_error();
        return;
      }
      if (self->open_) self->read();
    });
  }

  void handle(const Frame& frame) {
    if (const auto* hello = std::get_if<HelloFrame>(&frame)) {
      const std::string prefix = "client_" + std::to_string(serial_) + "_";
      if (hello->role == "operator" && svc_.operator_session == nullptr) {
        svc_.operator_session = this;
        operator_ = true;
      }
      svc_.remember_client(prefix + "name", hello->client);
      svc_.remember_client(prefix + "role", operator_ ? "operator" : "observer");
      send(std::make_shared<const std::string>(encode(svc_.instruction())));
    } else if (const auto* input = std::get_if<InputFrame>(&frame)) {
      if (operator_) svc_.deposit(*input);
    } else {
      throw MalformedFrame("clients may only send hello and input frames");
    }
  }

  void protocol_error() {
    if (!open_) return;
    open_ = false;
    ws_.async_close(websocket::close_reason(websocket::close_code::policy_error, "malformed frame"),
                    [self = shared_from_this()](beast::error_code) { self->svc_.drop(self.get()); });
  }

  void write() {
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(*queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->writing_ = false;
                        return self->svc_.drop(self.get());
                      }
                      self->queue_.pop_front();
                      if (!self->queue_.empty() && self->open_) {
                        self->write();
                      } else {
                        self->writing_ = false;
                      }
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  Impl& svc_;
  int serial_;
  bool writing_ = false;
  bool open_ = false;
  bool operator_ = false;
};

void TeleopService::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;  // acceptor closed
    const int serial = ++client_serial;
    beast::error_code ignored;
    const auto remote = socket.remote_endpoint(ignored);
    remember_client("client_" + std::to_string(serial) + "_remote",
                    remote.address().to_string(ignored) + ":" + std::to_string(remote.port()));
    auto session = std::make_shared<Session>(std::move(socket), *this, serial);
    sessions.push_back(session);
    clients = sessions.size();
    session->run();
    accept();
  });
}

void TeleopService::Impl::drop(Session* s) {
  if (operator_session == s) operator_session = nullptr;
  std::erase_if(sessions, [s](const auto& p) { return p.get() == s; });
  clients = sessions.size();
}

void TeleopService::Impl::broadcast(std::shared_ptr<const std::string> msg) {
  net::post(ioc, [this, msg = std::move(msg)] {
    for (const auto& s : sessions) s->send(msg);
  });
}

TeleopService::TeleopService(const Scenario& scenario, ServiceOptions options)
    : impl_(std::make_unique<Impl>(scenario, std::move(options))) {
  if (impl_->options.broadcast_every < 1) throw BadParams("broadcast_every must be at least 1");
}

TeleopService::~TeleopService() {
  if (impl_->io_thread.joinable()) {
    net::post(impl_->ioc, [this] {
      beast::error_code ignored;
      impl_->acceptor.close(ignored);
      for (const auto& s : impl_->sessions) s->close();
    });
    impl_->work.reset();
    impl_->ioc.stop();
    impl_->io_thread.join();
  }
}

void TeleopService::start() {
  Impl& im = *impl_;
  beast::error_code ec;
  const auto address = net::ip::make_address(im.options.address, ec);
  if (ec) throw BadParams("invalid listen address " + im.options.address);
  const tcp::endpoint endpoint(address, im.options.port);
  im.acceptor.open(endpoint.protocol(), ec);
  if (!ec) im.acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) im.acceptor.bind(endpoint, ec);
  if (!ec) im.acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw PortBusy("cannot listen on " + im.options.address + ":" + std::to_string(im.options.port) +
                   ": " + ec.message());
  }
  im.work.emplace(im.ioc.get_executor());
  im.accept();
  im.io_thread = std::thread([&im] { im.ioc.run(); });
}

unsigned short TeleopService::port() const {
  beast::error_code ec;
  return impl_->acceptor.local_endpoint(ec).port();
}

std::size_t TeleopService::client_count() const { return impl_->clients.load(); }

void TeleopService::stop() {
  impl_->stopping = true;
  impl_->mailbox_cv.notify_all();
}

EpisodeTrace TeleopService::run_session() {
  Impl& im = *impl_;
  const Scenario& sc = im.scenario;
  const ServiceOptions& opt = im.options;
  EpisodeRunner runner(sc, make_trace_header(sc, 0, "teleop"));
  const double limit = opt.max_duration > 0.0 ? opt.max_duration : sc.max_duration();
  const long max_ticks = std::lround(limit / sc.dt());
  const auto tick = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(sc.dt()));
  const auto started = Clock::now();
  const int dim = sc.human_dim();

  auto finish = [&] {
    net::post(im.ioc, [&im] {
      for (const auto& s : im.sessions) s->close();
    });
    EpisodeTrace trace = runner.take_trace();
    {
      std::lock_guard lock(im.meta_mutex);
      trace.header.client = im.client_meta;
    }
    if (!opt.trace_path.empty()) save_trace(opt.trace_path, trace);
    return trace;
  };

  try {
    for (long k = 0; k < max_ticks && !im.stopping; ++k) {
      const int task = runner.observe();
      if (task != im.active_task.exchange(task) || k == 0) {
        im.broadcast(std::make_shared<const std::string>(encode(im.instruction())));
      }
      if (opt.lockstep || k % opt.broadcast_every == 0) {
        im.broadcast(std::make_shared<const std::string>(encode(make_state_frame(runner))));
      }

      Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
      {
        std::unique_lock lock(im.mailbox_mutex);
        if (opt.lockstep) {
          im.mailbox_cv.wait_for(lock, opt.lockstep_timeout, [&] {
            return im.stopping.load() || (im.latest && im.latest->sequence >= k);
          });
          if (im.latest && im.latest->sequence >= k) {
            u = Eigen::Map<const Eigen::Vector3d>(im.latest->u_h.data());
          }
        } else if (im.latest && Clock::now() - im.received <= opt.deadman) {
          u = Eigen::Map<const Eigen::Vector3d>(im.latest->u_h.data());
        }
      }

      runner.step(OperatorInput{u, runner.state().time});
      if (opt.stop_when_complete && task < 0) break;
      if (!opt.lockstep) std::this_thread::sleep_until(started + (k + 1) * tick);
    }
  } catch (const Diverged&) {
    finish();
    throw;
  }
  return finish();
}

}  // namespace rmpta
