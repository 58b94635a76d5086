#include "eprsim/roles.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <vector>

#include "eprsim/exit_codes.hpp"

extern char** environ;

namespace eprsim::roles {

namespace {

double unix_now() {
  using namespace std::chrono;
  return duration<double>(system_clock::now().time_since_epoch()).count();
}

class Transcript {
 public:
  explicit Transcript(const std::optional<std::filesystem::path>& path) {
    if (!path) return;
    if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
    out_.open(*path, std::ios::binary | std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open transcript " + path->string());
  }

  void record(bool inbound, const std::string& peer, const wire::Message& m) {
    if (out_.is_open()) out_ << wire::transcript_line(inbound, peer, m, unix_now());
  }

 private:
  std::ofstream out_;
};

void send(net::LineChannel& ch, Transcript& t, const wire::Message& m) {
  t.record(false, ch.peer(), m);
  ch.send_line(wire::encode(m));
}

wire::Message receive(net::LineChannel& ch, Transcript& t, net::Millis timeout,
                      std::string_view who) {
  std::optional<std::string> line = ch.read_line(timeout);
  if (!line) {
    throw wire::ProtocolError(std::string(who) + ": " + ch.peer() +
                              " closed the connection early");
  }
  wire::Message m = wire::decode(*line);
  t.record(true, ch.peer(), m);
  return m;
}

std::string station_label(StationId s) { return "station" + std::to_string(to_int(s)); }

}  // namespace

void run_source(const SourceOptions& o) {
  Transcript transcript(o.transcript);
  const Endpoint& ep = o.endpoint;
  net::LineChannel to_collector(
      net::connect_with_retry(ep.host, ep.collector_port(), o.timeout, "collector"),
      "collector");
  net::LineChannel to_s1(net::connect_with_retry(ep.host, ep.station_port(StationId::kStation1),
                                                 o.timeout, "station1"),
                         "station1");
  net::LineChannel to_s2(net::connect_with_retry(ep.host, ep.station_port(StationId::kStation2),
                                                 o.timeout, "station2"),
                         "station2");
  net::LineChannel* peers[] = {&to_collector, &to_s1, &to_s2};

  const wire::Hello hello{wire::Role::kSource, std::nullopt, o.run_id};
  for (net::LineChannel* ch : peers) send(*ch, transcript, hello);

  PointSource source(o.seed);
  for (std::uint64_t i = 0; i < o.n_trials; ++i) {
    const TrialPoint tp = source.next();
    const wire::PointMsg msg{tp.trial_id, tp.point.x, tp.point.y};
    for (net::LineChannel* ch : peers) send(*ch, transcript, msg);
  }
  const wire::Done done{o.run_id, o.n_trials};
  for (net::LineChannel* ch : peers) {
    send(*ch, transcript, done);
    ch->flush();
  }
}

void run_station(const StationOptions& o) {
  Transcript transcript(o.transcript);
  const std::string me = station_label(o.station);
  net::Listener listener(o.endpoint.host, o.endpoint.station_port(o.station));

  wire::StationSession session;
  net::LineChannel control(listener.accept(o.timeout), "orchestrator");
  // StationSession rejects anything but CONFIG here.
  session.handle(receive(control, transcript, o.timeout, me), [](const wire::Message&) {});
  const wire::Config config = *session.config();
  if (config.station_id != o.station) {
    throw wire::ProtocolError(me + ": CONFIG addressed to station " +
                              std::to_string(to_int(config.station_id)));
  }

  net::LineChannel to_collector(
      net::connect_with_retry(o.endpoint.host, o.endpoint.collector_port(), o.timeout,
                              "collector"),
      "collector");
  send(to_collector, transcript, wire::Hello{wire::Role::kStation, o.station, config.run_id});

  net::LineChannel from_source(listener.accept(o.timeout), "source");
  const wire::StationSession::Emit emit = [&](const wire::Message& m) {
    send(to_collector, transcript, m);
  };
  while (!session.done()) {
    if (!from_source.has_buffered_line()) to_collector.flush();
    session.handle(receive(from_source, transcript, o.timeout, me), emit);
  }
  to_collector.flush();
}

void run_collector(const CollectorOptions& o) {
  Transcript transcript(o.transcript);
  net::Listener listener(o.endpoint.host, o.endpoint.collector_port());
  std::vector<std::vector<TrialRecord>> collected;

  for (const wire::RunManifest& manifest : run_manifests(o.config)) {
    wire::CollectorSession session(manifest);
    struct Stream {
      net::LineChannel channel;
      wire::Peer peer;
      bool open = true;
    };
    std::vector<Stream> streams;
    while (streams.size() < 3) {
      net::LineChannel ch(listener.accept(o.timeout), "unidentified peer");
      wire::Message first = receive(ch, transcript, o.timeout, "collector");
      const auto* hello = std::get_if<wire::Hello>(&first);
      if (hello == nullptr) {
        std::cerr << "collector: rejected connection that opened with "
                  << wire::type_name(first) << "\n";
        continue;
      }
      try {
        const wire::Peer peer = session.accept_hello(*hello);
        std::string name = peer.role == wire::Role::kSource
                               ? std::string("source")
                               : station_label(*peer.station_id);
        ch.set_peer(std::move(name));
        streams.push_back({std::move(ch), peer});
      } catch (const wire::ProtocolError& e) {
        std::cerr << "collector: handshake rejected: " << e.what() << "\n";
      }
    }

    while (!session.complete()) {
      std::vector<pollfd> fds;
      for (const Stream& s : streams) fds.push_back({s.channel.fd(), POLLIN, 0});
      const int rc = ::poll(fds.data(), fds.size(), static_cast<int>(o.timeout.count()));
      if (rc == 0) {
        throw net::NetError("collector: timed out during run " + manifest.run_id);
      }
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw net::NetError("collector: poll failed");
      }
      for (std::size_t k = 0; k < streams.size(); ++k) {
        Stream& s = streams[k];
        if (!s.open || !(fds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
        const bool more = s.channel.fill();
        while (auto line = s.channel.pop_line()) {
          wire::Message m = wire::decode(*line);
          transcript.record(true, s.channel.peer(), m);
          session.handle(s.peer, m);
        }
        if (!more) s.open = false;
      }
      bool any_open = false;
      for (const Stream& s : streams) any_open = any_open || s.open;
      if (!any_open && !session.complete()) {
        throw wire::ProtocolError("collector: peers disconnected before run " +
                                  manifest.run_id + " completed");
      }
    }
    collected.push_back(session.finish());
  }

  ExperimentRuns runs{std::move(collected[0]), std::move(collected[1]),
                      std::move(collected[2])};
  write_artifacts(o.config, runs, o.paths);
}

void send_config(const Endpoint& endpoint, const wire::Config& config,
                 net::Millis timeout) {
  const std::string who = station_label(config.station_id);
  net::LineChannel ch(
      net::connect_with_retry(endpoint.host, endpoint.station_port(config.station_id),
                              timeout, who),
      who);
  ch.write_all(wire::encode(config));
}

std::filesystem::path station_transcript_path(const std::filesystem::path& dir,
                                              const std::string& run_id,
                                              StationId station) {
  return dir / (run_id + "." + station_label(station) + ".transcript");
}

// ---------------------------------------------------------------------------

namespace {

class Child {
 public:
  Child(std::string role, const std::filesystem::path& exe, std::vector<std::string> args)
      : role_(std::move(role)) {
    args.insert(args.begin(), exe.string());
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    const int rc = ::posix_spawn(&pid_, exe.c_str(), nullptr, nullptr, argv.data(), environ);
    if (rc != 0) {
      pid_ = -1;
      throw net::NetError("cannot spawn " + role_ + " process: " + std::strerror(rc));
    }
  }
  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  ~Child() {
    if (pid_ > 0) {
      ::kill(pid_, SIGTERM);
      int status = 0;
      ::waitpid(pid_, &status, 0);
    }
  }

  /// Waits for exit and throws when the role failed.
  void join() {
    int status = 0;
    if (::waitpid(pid_, &status, 0) < 0) {
      throw net::NetError("waitpid for " + role_ + " failed");
    }
    pid_ = -1;
    if (WIFEXITED(status) && WEXITSTATUS(status) == 0) return;
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    const std::string what = role_ + " process failed (exit " + std::to_string(code) + ")";
    if (code == exit_value(ExitCode::kProtocol)) throw wire::ProtocolError(what);
    throw net::NetError(what);
  }

 private:
  std::string role_;
  pid_t pid_ = -1;
};

std::vector<std::string> endpoint_args(const Endpoint& ep) {
  return {"--host", ep.host, "--port-base", std::to_string(ep.port_base)};
}

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string timeout_arg(net::Millis t) { return std::to_string(t.count()); }

}  // namespace

void run_bell_net(const BellConfig& config, const NetRunOptions& o) {
  validate(config);
  const auto manifests = run_manifests(config);
  const std::vector<std::string> common =
      endpoint_args(o.endpoint) + std::vector<std::string>{"--timeout-ms", timeout_arg(o.timeout)};
  auto transcript_args = [&](const std::string& file) -> std::vector<std::string> {
    if (!o.transcript_dir) return {};
    return {"--transcript", (*o.transcript_dir / file).string()};
  };
  if (o.transcript_dir) std::filesystem::create_directories(*o.transcript_dir);

  Child collector(
      "collector", o.executable,
      std::vector<std::string>{"role", "collector", "--a", format_real(config.a_rad), "--b",
                               format_real(config.b_rad), "--c", format_real(config.c_rad),
                               "--n", std::to_string(config.n_trials), "--seed",
                               std::to_string(config.seed), "--share-stream",
                               config.share_stream ? "true" : "false", "--out",
                               o.paths.report.string(), "--csv-dir", o.paths.csv_dir.string()} +
          common + transcript_args("collector.transcript"));

  for (const wire::RunManifest& m : manifests) {
    auto station = [&](StationId s) {
      std::vector<std::string> args{"role", "station", "--station-id",
                                    std::to_string(to_int(s))};
      args = args + common;
      if (o.transcript_dir) {
        args = args + std::vector<std::string>{
                          "--transcript",
                          station_transcript_path(*o.transcript_dir, m.run_id, s).string()};
      }
      return args;
    };
    Child s1(station_label(StationId::kStation1), o.executable, station(StationId::kStation1));
    Child s2(station_label(StationId::kStation2), o.executable, station(StationId::kStation2));

    send_config(o.endpoint, {m.run_id, StationId::kStation1, m.setting1, m.n_trials}, o.timeout);
    send_config(o.endpoint, {m.run_id, StationId::kStation2, m.setting2, m.n_trials}, o.timeout);

    Child source("source", o.executable,
                 std::vector<std::string>{"role", "source", "--run-id", m.run_id, "--seed",
                                          std::to_string(m.seed), "--n",
                                          std::to_string(m.n_trials)} +
                     common + transcript_args(m.run_id + ".source.transcript"));
    source.join();
    s1.join();
    s2.join();
  }
  collector.join();
}

}  // namespace eprsim::roles
