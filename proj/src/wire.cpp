#include "eprsim/wire.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>

#include <json.hpp>

namespace eprsim::wire {

using Json = nlohmann::ordered_json;

std::string_view role_name(Role r) {
  switch (r) {
    case Role::kSource:
      return "source";
    case Role::kStation:
      return "station";
    case Role::kCollector:
      return "collector";
  }
  return "?";
}

std::string_view type_name(const Message& m) {
  struct Visitor {
    std::string_view operator()(const Hello&) const { return "HELLO"; }
    std::string_view operator()(const Config&) const { return "CONFIG"; }
    std::string_view operator()(const PointMsg&) const { return "POINT"; }
    std::string_view operator()(const Answer&) const { return "ANSWER"; }
    std::string_view operator()(const Done&) const { return "DONE"; }
  };
  return std::visit(Visitor{}, m);
}

namespace {

Json to_json(const Message& m) {
  Json j;
  j["type"] = std::string(type_name(m));
  struct Visitor {
    Json& j;
    void operator()(const Hello& h) const {
      j["role"] = std::string(role_name(h.role));
      if (h.station_id) j["station_id"] = to_int(*h.station_id);
      j["run_id"] = h.run_id;
    }
    void operator()(const Config& c) const {
      j["run_id"] = c.run_id;
      j["station_id"] = to_int(c.station_id);
      j["setting_angle_rad"] = c.setting_angle_rad;
      j["n_trials"] = c.n_trials;
    }
    void operator()(const PointMsg& p) const {
      j["trial_id"] = p.trial_id;
      j["x"] = p.x;
      j["y"] = p.y;
    }
    void operator()(const Answer& a) const {
      j["trial_id"] = a.trial_id;
      j["station_id"] = to_int(a.station_id);
      j["value"] = a.value.value();
    }
    void operator()(const Done& d) const {
      j["run_id"] = d.run_id;
      j["count"] = d.count;
    }
  };
  std::visit(Visitor{j}, m);
  return j;
}

// Field access with strict typing. Each getter marks the key as consumed so
// leftovers can be reported as unknown fields.
class Fields {
 public:
  explicit Fields(const Json& j) : j_(j) {}

  const Json& require(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) {
      throw WireError(key, "missing field '" + key + "'");
    }
    used_.insert(key);
    return *it;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::string string(const std::string& key) {
    const Json& v = require(key);
    if (!v.is_string() || v.get<std::string>().empty()) {
      throw WireError(key, "field '" + key + "' must be a non-empty string");
    }
    return v.get<std::string>();
  }

  std::int64_t integer(const std::string& key) {
    const Json& v = require(key);
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(INT64_MAX)) {
        throw WireError(key, "field '" + key + "' out of range");
      }
      return static_cast<std::int64_t>(u);
    }
    if (!v.is_number_integer()) {
      throw WireError(key, "field '" + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
  }

  std::uint64_t non_negative(const std::string& key) {
    const std::int64_t v = integer(key);
    if (v < 0) throw WireError(key, "field '" + key + "' must be >= 0");
    return static_cast<std::uint64_t>(v);
  }

  double real(const std::string& key) {
    const Json& v = require(key);
    if (!v.is_number()) {
      throw WireError(key, "field '" + key + "' must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      throw WireError(key, "field '" + key + "' must be finite");
    }
    return d;
  }

  StationId station(const std::string& key) {
    const std::int64_t v = integer(key);
    if (v != 1 && v != 2) {
      throw WireError(key, "field '" + key + "' must be 1 or 2");
    }
    return station_from_int(static_cast<int>(v));
  }

  void reject_unknown() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) {
        throw WireError(it.key(), "unknown field '" + it.key() + "'");
      }
    }
  }

 private:
  const Json& j_;
  std::set<std::string> used_;
};

Role parse_role(Fields& f) {
  const std::string r = f.string("role");
  if (r == "source") return Role::kSource;
  if (r == "station") return Role::kStation;
  if (r == "collector") return Role::kCollector;
  throw WireError("role", "unknown role '" + r + "'");
}

}  // namespace

std::string encode(const Message& m) { return to_json(m).dump() + '\n'; }

Message decode(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (line.find('\n') != std::string_view::npos) {
    throw WireError("", "embedded newline in message");
  }
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw WireError("", std::string("malformed line: ") + e.what());
  }
  if (!j.is_object()) {
    throw WireError("", "message must be a JSON object");
  }
  Fields f(j);
  const Json& type = f.require("type");
  if (!type.is_string()) throw WireError("type", "field 'type' must be a string");
  const std::string t = type.get<std::string>();

  Message out;
  if (t == "HELLO") {
    Hello h{parse_role(f), std::nullopt, f.string("run_id")};
    if (h.role == Role::kStation) {
      h.station_id = f.station("station_id");
    } else if (f.has("station_id")) {
      throw WireError("station_id", "station_id only allowed for role station");
    }
    out = h;
  } else if (t == "CONFIG") {
    Config c{f.string("run_id"), f.station("station_id"),
             f.real("setting_angle_rad"), f.non_negative("n_trials")};
    if (c.setting_angle_rad < 0.0 || c.setting_angle_rad >= kTwoPi) {
      throw WireError("setting_angle_rad", "setting_angle_rad must lie in [0, 2pi)");
    }
    if (c.n_trials < 1) throw WireError("n_trials", "n_trials must be >= 1");
    out = c;
  } else if (t == "POINT") {
    out = PointMsg{f.non_negative("trial_id"), f.real("x"), f.real("y")};
  } else if (t == "ANSWER") {
    const std::uint64_t id = f.non_negative("trial_id");
    const StationId s = f.station("station_id");
    const std::int64_t v = f.integer("value");
    if (v != 1 && v != -1) throw WireError("value", "value must be -1 or 1");
    out = Answer{id, s, Sign::from_int(static_cast<int>(v))};
  } else if (t == "DONE") {
    out = Done{f.string("run_id"), f.non_negative("count")};
  } else {
    throw WireError("type", "unknown message type '" + t + "'");
  }
  f.reject_unknown();
  return out;
}

// ---------------------------------------------------------------------------

void StationSession::handle(const Message& in, const Emit& emit) {
  if (done_) {
    if (std::holds_alternative<Done>(in)) return;
    throw ProtocolError("station: " + std::string(type_name(in)) +
                        " after DONE");
  }
  if (const auto* c = std::get_if<Config>(&in)) {
    if (config_) throw ProtocolError("station: second CONFIG");
    config_ = *c;
    observable_ = rule_->bind(c->station_id, Direction::from_radians(c->setting_angle_rad));
    return;
  }
  if (!config_) {
    throw ProtocolError("station: " + std::string(type_name(in)) +
                        " before CONFIG");
  }
  if (const auto* h = std::get_if<Hello>(&in)) {
    if (h->role != Role::kSource || h->run_id != config_->run_id) {
      throw ProtocolError("station: unexpected HELLO from " +
                          std::string(role_name(h->role)) + " for run " +
                          h->run_id);
    }
    return;
  }
  if (const auto* p = std::get_if<PointMsg>(&in)) {
    const Point pt{p->x, p->y};
    if (!in_unit_disk(pt)) {
      throw ProtocolError("station: trial " + std::to_string(p->trial_id) +
                          " lies outside the unit disk");
    }
    if (!seen_.insert(p->trial_id).second) {
      throw ProtocolError("station: duplicate trial_id " +
                          std::to_string(p->trial_id));
    }
    ++answered_;
    emit(Answer{p->trial_id, config_->station_id, observable_(pt)});
    return;
  }
  if (const auto* d = std::get_if<Done>(&in)) {
    if (d->run_id != config_->run_id) {
      throw ProtocolError("station: DONE for foreign run " + d->run_id);
    }
    done_ = true;
    emit(Done{config_->run_id, answered_});
    return;
  }
  throw ProtocolError("station: unexpected " + std::string(type_name(in)));
}

Done station_loop(const Config& config, std::span<const Message> inbound,
                  const StationSession::Emit& emit) {
  StationSession session;
  std::optional<Done> done;
  const StationSession::Emit capture = [&](const Message& m) {
    if (const auto* d = std::get_if<Done>(&m)) done = *d;
    emit(m);
  };
  session.handle(config, capture);
  for (const Message& m : inbound) {
    session.handle(m, capture);
  }
  if (!done) {
    throw ProtocolError("station: inbound stream ended before DONE");
  }
  return *done;
}

// ---------------------------------------------------------------------------

CollectorSession::CollectorSession(RunManifest manifest)
    : manifest_(std::move(manifest)) {}

Peer CollectorSession::accept_hello(const Hello& hello) {
  if (hello.run_id != manifest_.run_id) {
    throw ProtocolError("collector: HELLO for run " + hello.run_id +
                        ", expected " + manifest_.run_id);
  }
  switch (hello.role) {
    case Role::kSource:
      if (source_joined_) throw ProtocolError("collector: second source rejected");
      source_joined_ = true;
      return {Role::kSource, std::nullopt};
    case Role::kStation: {
      const int id = to_int(*hello.station_id);
      if (!stations_joined_.insert(id).second) {
        throw ProtocolError("collector: duplicate station_id " +
                            std::to_string(id) + " rejected");
      }
      return {Role::kStation, hello.station_id};
    }
    case Role::kCollector:
      break;
  }
  throw ProtocolError("collector: peer claims role collector");
}

void CollectorSession::handle(const Peer& from, const Message& m) {
  if (const auto* d = std::get_if<Done>(&m)) {
    if (d->run_id != manifest_.run_id) {
      throw ProtocolError("collector: DONE for foreign run " + d->run_id);
    }
    std::optional<std::uint64_t>& slot =
        from.role == Role::kSource ? source_done_
                                   : station_done_[to_int(*from.station_id) - 1];
    if (!slot) slot = d->count;
    return;
  }
  if (from.role == Role::kSource) {
    const auto* p = std::get_if<PointMsg>(&m);
    if (p == nullptr) {
      throw ProtocolError("collector: source sent " + std::string(type_name(m)));
    }
    if (source_done_) throw ProtocolError("collector: POINT after source DONE");
    if (!points_.emplace(p->trial_id, Point{p->x, p->y}).second) {
      throw ProtocolError("collector: duplicate point for trial " +
                          std::to_string(p->trial_id));
    }
    return;
  }
  const auto* a = std::get_if<Answer>(&m);
  if (from.role != Role::kStation || a == nullptr) {
    throw ProtocolError("collector: unexpected " + std::string(type_name(m)));
  }
  if (a->station_id != *from.station_id) {
    throw ProtocolError("collector: station " + std::to_string(to_int(*from.station_id)) +
                        " sent an answer labelled station " +
                        std::to_string(to_int(a->station_id)));
  }
  auto& answers = a->station_id == StationId::kStation1 ? answers1_ : answers2_;
  if (!answers.emplace(a->trial_id, a->value).second) {
    throw ProtocolError("collector: duplicate answer for trial " +
                        std::to_string(a->trial_id) + " from station " +
                        std::to_string(to_int(a->station_id)));
  }
}

bool CollectorSession::complete() const {
  return source_done_ && station_done_[0] && station_done_[1];
}

std::vector<TrialRecord> CollectorSession::finish() const {
  if (!complete()) throw ProtocolError("collector: run " + manifest_.run_id + " incomplete");
  auto unpaired = [](std::uint64_t id, const std::string& why) {
    return ProtocolError("collector: unpaired trial " + std::to_string(id) + " (" + why + ")");
  };
  const Direction s1 = Direction::from_radians(manifest_.setting1);
  const Direction s2 = Direction::from_radians(manifest_.setting2);
  std::vector<TrialRecord> records;
  records.reserve(points_.size());
  auto it1 = answers1_.begin();
  auto it2 = answers2_.begin();
  for (const auto& [id, point] : points_) {
    if (it1 != answers1_.end() && it1->first < id) throw unpaired(it1->first, "no point");
    if (it2 != answers2_.end() && it2->first < id) throw unpaired(it2->first, "no point");
    if (it1 == answers1_.end() || it1->first != id) throw unpaired(id, "missing station 1 answer");
    if (it2 == answers2_.end() || it2->first != id) throw unpaired(id, "missing station 2 answer");
    records.push_back({id, point, s1, s2, it1->second, it2->second});
    ++it1;
    ++it2;
  }
  if (it1 != answers1_.end()) throw unpaired(it1->first, "no point");
  if (it2 != answers2_.end()) throw unpaired(it2->first, "no point");
  if (records.size() != manifest_.n_trials || *source_done_ != records.size() ||
      *station_done_[0] != records.size() || *station_done_[1] != records.size()) {
    throw ProtocolError("collector: run " + manifest_.run_id + " expected " +
                        std::to_string(manifest_.n_trials) + " trials, paired " +
                        std::to_string(records.size()));
  }
  return records;
}

// ---------------------------------------------------------------------------

std::string transcript_line(bool inbound, std::string_view peer,
                            const Message& m, double timestamp) {
  char ts[32];
  std::snprintf(ts, sizeof ts, "%.6f", timestamp);
  std::string line = inbound ? "IN\t" : "OUT\t";
  line += ts;
  line += '\t';
  line += peer;
  line += '\t';
  line += encode(m);
  return line;
}

LocalityAudit audit_station_transcript(std::span<const std::string> lines,
                                       StationId station) {
  LocalityAudit audit;
  auto fail = [&](std::string why) {
    audit.pass = false;
    audit.problems.push_back(std::move(why));
  };
  std::map<std::string, std::set<double>> settings_by_run;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    if (line.rfind("IN\t", 0) != 0) continue;
    const std::size_t json_at = [&] {
      std::size_t pos = 0;
      for (int tabs = 0; tabs < 3 && pos != std::string::npos; ++tabs) {
        pos = line.find('\t', pos);
        if (pos != std::string::npos) ++pos;
      }
      return pos;
    }();
    if (json_at == std::string::npos) {
      fail("line " + std::to_string(i + 1) + ": malformed transcript line");
      continue;
    }
    ++audit.inbound_messages;
    Message m;
    try {
      m = decode(std::string_view(line).substr(json_at));
    } catch (const WireError& e) {
      fail("line " + std::to_string(i + 1) + ": " + e.what());
      continue;
    }
    if (const auto* c = std::get_if<Config>(&m)) {
      if (c->station_id != station) {
        fail("line " + std::to_string(i + 1) + ": CONFIG addressed to station " +
             std::to_string(to_int(c->station_id)));
      }
      settings_by_run[c->run_id].insert(c->setting_angle_rad);
    } else if (std::holds_alternative<Answer>(m)) {
      fail("line " + std::to_string(i + 1) + ": station received an ANSWER");
    }
  }
  for (const auto& [run, settings] : settings_by_run) {
    if (settings.size() > 1) {
      fail("run " + run + ": station saw " + std::to_string(settings.size()) +
           " distinct settings");
    }
  }
  return audit;
}

}  // namespace eprsim::wire
