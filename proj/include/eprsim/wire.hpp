#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "eprsim/experiment.hpp"
#include "eprsim/response.hpp"

// Line-delimited JSON messages exchanged between the source, the two
// stations and the collector. Decoding is strict: a message carries exactly
// its own fields, so nothing delivered to a station can smuggle in the other
// station's setting.
namespace eprsim::wire {

enum class Role { kSource, kStation, kCollector };

std::string_view role_name(Role r);

struct Hello {
  Role role;
  std::optional<StationId> station_id;  // present iff role == kStation
  std::string run_id;
  friend bool operator==(const Hello&, const Hello&) = default;
};

struct Config {
  std::string run_id;
  StationId station_id;
  double setting_angle_rad;
  std::uint64_t n_trials;
  friend bool operator==(const Config&, const Config&) = default;
};

struct PointMsg {
  std::uint64_t trial_id;
  double x;
  double y;
  friend bool operator==(const PointMsg&, const PointMsg&) = default;
};

struct Answer {
  std::uint64_t trial_id;
  StationId station_id;
  Sign value;
  friend bool operator==(const Answer&, const Answer&) = default;
};

struct Done {
  std::string run_id;
  std::uint64_t count;
  friend bool operator==(const Done&, const Done&) = default;
};

using Message = std::variant<Hello, Config, PointMsg, Answer, Done>;

std::string_view type_name(const Message& m);

/// Malformed input. field() names the offending field ("" for whole-line
/// problems such as bad JSON).
class WireError : public std::runtime_error {
 public:
  WireError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A well-formed message arriving out of protocol order.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One JSON object terminated by '\n', "type" first.
std::string encode(const Message& m);

/// Accepts a line with or without its trailing '\n'.
Message decode(std::string_view line);

struct RunManifest {
  std::string run_id;
  std::uint64_t seed;
  std::uint64_t n_trials;
  double setting1;
  double setting2;
  ExperimentTag experiment_tag;
  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

/// Station role logic, independent of transport.
class StationSession {
 public:
  using Emit = std::function<void(const Message&)>;

  explicit StationSession(const ResponseRule& rule = default_rule())
      : rule_(&rule) {}

  /// Throws ProtocolError on POINT before CONFIG, a second CONFIG, duplicate
  /// trial ids, points outside the disk, or traffic after DONE.
  void handle(const Message& in, const Emit& emit);

  bool configured() const { return config_.has_value(); }
  bool done() const { return done_; }
  const std::optional<Config>& config() const { return config_; }

 private:
  const ResponseRule* rule_;
  std::optional<Config> config_;
  LocalObservable observable_;
  std::unordered_set<std::uint64_t> seen_;
  std::uint64_t answered_ = 0;
  bool done_ = false;
};

/// Feeds CONFIG then every inbound message through a StationSession. Returns
/// the DONE the station emitted. Throws ProtocolError when the inbound
/// stream ends without the source's DONE.
Done station_loop(const Config& config, std::span<const Message> inbound,
                  const StationSession::Emit& emit);

/// Who a collector-side stream belongs to, established by its HELLO.
struct Peer {
  Role role;
  std::optional<StationId> station_id;
  friend bool operator==(const Peer&, const Peer&) = default;
};

/// Pairs the source's points with both stations' answers for one run.
class CollectorSession {
 public:
  explicit CollectorSession(RunManifest manifest);

  /// Registers a HELLO; throws ProtocolError on a wrong run id, a duplicate
  /// station id or a second source.
  Peer accept_hello(const Hello& hello);

  /// Throws ProtocolError on duplicate halves or messages a peer may not
  /// send. A repeated DONE from the same peer is ignored.
  void handle(const Peer& from, const Message& m);

  /// True once the source and both stations sent DONE.
  bool complete() const;

  /// Records sorted by trial id. Throws ProtocolError naming the first
  /// unpaired trial, or when counts disagree with the manifest.
  std::vector<TrialRecord> finish() const;

  const RunManifest& manifest() const { return manifest_; }

 private:
  RunManifest manifest_;
  bool source_joined_ = false;
  std::set<int> stations_joined_;
  std::map<std::uint64_t, Point> points_;
  std::map<std::uint64_t, Sign> answers1_;
  std::map<std::uint64_t, Sign> answers2_;
  std::optional<std::uint64_t> source_done_;
  std::optional<std::uint64_t> station_done_[2];
};

/// Transcript line: "IN|OUT <tab> unix-seconds <tab> peer <tab> json".
std::string transcript_line(bool inbound, std::string_view peer,
                            const Message& m, double timestamp);

struct LocalityAudit {
  bool pass = true;
  std::uint64_t inbound_messages = 0;
  std::vector<std::string> problems;
};

/// Scans one station's transcript: every inbound message must decode
/// strictly, CONFIGs must address `station`, and per run at most one distinct
/// setting value may reach the station.
LocalityAudit audit_station_transcript(std::span<const std::string> lines,
                                       StationId station);

}  // namespace eprsim::wire
