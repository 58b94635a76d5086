#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "eprsim/net.hpp"
#include "eprsim/report.hpp"
#include "eprsim/wire.hpp"

// Process roles for a distributed Bell run. Ports: the collector listens on
// port_base, station k on port_base + k.
namespace eprsim::roles {

struct Endpoint {
  std::string host = "127.0.0.1";
  int port_base = 47100;

  int collector_port() const { return port_base; }
  int station_port(StationId s) const { return port_base + to_int(s); }
};

inline constexpr net::Millis kDefaultTimeout{20000};

struct SourceOptions {
  Endpoint endpoint;
  std::string run_id;
  std::uint64_t seed = 0;
  std::uint64_t n_trials = kDefaultTrials;
  std::optional<std::filesystem::path> transcript;
  net::Millis timeout = kDefaultTimeout;
};

/// Streams the seeded points to both stations and the collector.
void run_source(const SourceOptions& options);

struct StationOptions {
  Endpoint endpoint;
  StationId station = StationId::kStation1;
  std::optional<std::filesystem::path> transcript;
  net::Millis timeout = kDefaultTimeout;
};

/// One run: reads CONFIG from the first inbound connection, then answers the
/// source's points to the collector. Throws wire::ProtocolError on protocol
/// violations and net::NetError on connection failures.
void run_station(const StationOptions& options);

struct CollectorOptions {
  Endpoint endpoint;
  BellConfig config;
  ArtifactPaths paths;
  std::optional<std::filesystem::path> transcript;
  net::Millis timeout = kDefaultTimeout;
};

/// Collects experiments I, II, III in order and writes the same artifacts as
/// a local run.
void run_collector(const CollectorOptions& options);

/// Delivers a CONFIG over a fresh connection to the station's port.
void send_config(const Endpoint& endpoint, const wire::Config& config,
                 net::Millis timeout);

struct NetRunOptions {
  /// The eprsim binary used to spawn the role processes.
  std::filesystem::path executable;
  Endpoint endpoint;
  ArtifactPaths paths;
  /// Per-role transcript files are written here when set.
  std::optional<std::filesystem::path> transcript_dir;
  net::Millis timeout = kDefaultTimeout;
};

/// Orchestrates one collector plus, per experiment, two stations and a
/// source, each a separate process. Throws wire::ProtocolError or
/// net::NetError naming the failing role.
void run_bell_net(const BellConfig& config, const NetRunOptions& options);

/// Transcript file names used by run_bell_net.
std::filesystem::path station_transcript_path(const std::filesystem::path& dir,
                                              const std::string& run_id,
                                              StationId station);

}  // namespace eprsim::roles
