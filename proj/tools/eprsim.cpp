// eprsim: command-line front end for the three-computer Bell experiment.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eprsim/exit_codes.hpp"
#include "eprsim/ghz.hpp"
#include "eprsim/oracle.hpp"
#include "eprsim/report.hpp"
#include "eprsim/roles.hpp"
#include "eprsim/wire.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace eprsim;

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EndpointFlags {
  std::string host = "127.0.0.1";
  int port_base = 47100;
  std::int64_t timeout_ms = roles::kDefaultTimeout.count();

  void add(CLI::App* app) {
    app->add_option("--host", host, "Host for role connections");
    app->add_option("--port-base", port_base,
                    "Collector port; stations use port-base+1 and port-base+2");
    app->add_option("--timeout-ms", timeout_ms, "Per-operation network timeout");
  }
  roles::Endpoint endpoint() const { return {host, port_base}; }
  net::Millis timeout() const { return net::Millis(timeout_ms); }
};

void add_angle_flags(CLI::App* app, BellConfig& c) {
  app->add_option("--a", c.a_rad, "Setting a in radians");
  app->add_option("--b", c.b_rad, "Setting b in radians");
  app->add_option("--c", c.c_rad, "Setting c in radians");
  app->add_option("--n", c.n_trials, "Trials per experiment");
  app->add_option("--seed", c.seed, "Seed; experiments I-III use seed, seed+1, seed+2");
  app->add_option("--share-stream", c.share_stream,
                  "Replay one point stream in all three experiments");
}

Json joint_json(const JointStats& j) {
  return Json{{"p_pp", j.p_pp}, {"p_pm", j.p_pm}, {"p_mp", j.p_mp}, {"p_mm", j.p_mm}};
}

int cmd_oracle(double a_rad, double b_rad, double grid_step) {
  const Direction a = Direction::from_radians(a_rad);
  const Direction b = Direction::from_radians(b_rad);
  Json out{{"a_rad", a.angle_rad()},
           {"b_rad", b.angle_rad()},
           {"angular_distance", angular_distance(a, b)},
           {"exact_joint", joint_json(exact_joint(a, b))},
           {"exact_corr", exact_corr(a, b)}};
  if (grid_step > 0.0) {
    const JointStats g = grid_joint(a, b, grid_step);
    out["grid_step"] = grid_step;
    out["grid_joint"] = joint_json(g);
    out["grid_corr"] = -1.0 + 4.0 * g.p_mm;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

void print_bell_summary(const Json& report) {
  const Json& ex = report["exact"];
  const Json& em = report["empirical"];
  std::cout << "exact:     lhs=" << format_real(ex["lhs"].get<double>())
            << " rhs=" << format_real(ex["rhs"].get<double>())
            << " violation=" << format_real(ex["violation"].get<double>()) << "\n";
  std::cout << "empirical: lhs=" << format_real(em["lhs"].get<double>())
            << " rhs=" << format_real(em["rhs"].get<double>())
            << " violation=" << format_real(em["violation"].get<double>());
  if (em["z_score"].is_number()) {
    std::cout << " z=" << format_real(em["z_score"].get<double>());
  }
  std::cout << "\n";
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return Json::parse(in);
}

int cmd_bell(const BellConfig& config, const std::string& mode, const ArtifactPaths& paths,
             const EndpointFlags& ep, const std::string& transcript, bool verify) {
  validate(config);
  if (mode == "local") {
    write_artifacts(config, run_bell_local(config), paths);
  } else if (mode == "net") {
    roles::NetRunOptions opts;
    opts.executable = std::filesystem::read_symlink("/proc/self/exe");
    opts.endpoint = ep.endpoint();
    opts.paths = paths;
    opts.timeout = ep.timeout();
    if (!transcript.empty()) opts.transcript_dir = transcript;
    roles::run_bell_net(config, opts);
  } else {
    throw std::invalid_argument("--mode must be local or net");
  }
  const Json report = read_json_file(paths.report);
  print_bell_summary(report);
  if (verify) {
    const ReportCheck check = verify_report_json(report);
    for (const std::string& p : check.problems) std::cerr << "verify: " << p << "\n";
    if (!check.ok) throw VerificationFailure("report verification failed");
    std::cout << "verify: ok\n";
  }
  return 0;
}

void print_solution(const std::string& title, const ghz::ConstraintSystem& system) {
  std::cout << title << " [";
  for (std::size_t i = 0; i < system.constraints().size(); ++i) {
    std::cout << (i ? " " : "") << system.constraints()[i].label;
  }
  std::cout << "]\n";
  const ghz::SolveResult result = ghz::solve(system);
  if (const auto* sat = std::get_if<ghz::Satisfiable>(&result)) {
    std::cout << "  SATISFIABLE witness: " << ghz::format_assignment(sat->witness) << "\n";
    return;
  }
  std::cout << "  UNSATISFIABLE; violated constraint per assignment:\n";
  for (const ghz::RefutationRow& row : std::get<ghz::Unsatisfiable>(result).certificate) {
    std::cout << "    " << ghz::format_assignment(row.assignment) << "  violates "
              << row.violated_label << "\n";
  }
}

int cmd_ghz() {
  print_solution("cross-particle system", ghz::cross_particle_system());
  print_solution("full attribution system", ghz::full_attribution_system());
  print_solution("full attribution system without (3)",
                 ghz::full_attribution_system().without("(3)"));
  return 0;
}

int cmd_audit(const std::string& path, int station) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  const wire::LocalityAudit audit =
      wire::audit_station_transcript(lines, station_from_int(station));
  for (const std::string& p : audit.problems) std::cerr << "audit: " << p << "\n";
  std::cout << (audit.pass ? "PASS" : "FAIL") << " locality audit, "
            << audit.inbound_messages << " inbound messages\n";
  if (!audit.pass) throw VerificationFailure("locality audit failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical three-computer EPR experiment: local answers that violate Bell's inequality"};
  app.set_config("--config", "",
                 "TOML/INI file; keys mirror the flags under a [subcommand] table; flags win");
  app.fallthrough();
  app.require_subcommand(1);

  double oracle_a = 0.0, oracle_b = 0.3141593, oracle_step = 0.0;
  CLI::App* oracle = app.add_subcommand("oracle", "Exact joint statistics for two settings");
  oracle->add_option("--a", oracle_a, "Station 1 setting (radians)");
  oracle->add_option("--b", oracle_b, "Station 2 setting (radians)");
  oracle->add_option("--grid-step", oracle_step, "Also run the lattice cross-check");

  BellConfig bell_config;
  std::string mode = "local";
  std::string out_path = "bell_report.json";
  std::string csv_dir = ".";
  std::string transcript;
  bool verify = false;
  EndpointFlags bell_ep;
  CLI::App* bell = app.add_subcommand("bell", "Run experiments I, II, III and report");
  add_angle_flags(bell, bell_config);
  bell->add_option("--mode", mode, "local or net")->check(CLI::IsMember({"local", "net"}));
  bell->add_option("--out", out_path, "Report JSON path");
  bell->add_option("--csv-dir", csv_dir, "Directory for experiment_{I,II,III}.csv");
  bell->add_option("--transcript", transcript, "Net mode: directory for role transcripts");
  bell->add_flag("--verify", verify, "Recompute the report's derived numbers and check");
  bell_ep.add(bell);

  app.add_subcommand("ghz", "Exhaustive check of the value-attribution contradiction");

  std::string audit_path;
  int audit_station = 1;
  CLI::App* audit = app.add_subcommand("audit", "Locality audit of a station transcript");
  audit->add_option("transcript", audit_path)->required();
  audit->add_option("--station-id", audit_station)->required();

  CLI::App* role = app.add_subcommand("role", "Run one process of a distributed experiment");
  role->require_subcommand(1);

  EndpointFlags src_ep;
  std::string src_run_id, src_transcript;
  std::uint64_t src_seed = 0, src_n = kDefaultTrials;
  CLI::App* source = role->add_subcommand("source", "Point source");
  src_ep.add(source);
  source->add_option("--run-id", src_run_id)->required();
  source->add_option("--seed", src_seed)->required();
  source->add_option("--n", src_n)->required();
  source->add_option("--transcript", src_transcript);

  EndpointFlags st_ep;
  int st_id = 1;
  std::string st_transcript;
  CLI::App* station = role->add_subcommand("station", "Measuring station");
  st_ep.add(station);
  station->add_option("--station-id", st_id)->required()->check(CLI::Range(1, 2));
  station->add_option("--transcript", st_transcript);

  EndpointFlags col_ep;
  BellConfig col_config;
  std::string col_out = "bell_report.json", col_csv = ".", col_transcript;
  CLI::App* collector = role->add_subcommand("collector", "Answer collector");
  col_ep.add(collector);
  add_angle_flags(collector, col_config);
  collector->add_option("--out", col_out);
  collector->add_option("--csv-dir", col_csv);
  collector->add_option("--transcript", col_transcript);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_value(ExitCode::kConfig);
  }

  auto optional_path = [](const std::string& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) return std::nullopt;
    return s;
  };

  try {
    if (*oracle) return cmd_oracle(oracle_a, oracle_b, oracle_step);
    if (*bell) {
      return cmd_bell(bell_config, mode, {out_path, csv_dir}, bell_ep, transcript, verify);
    }
    if (app.got_subcommand("ghz")) return cmd_ghz();
    if (*audit) return cmd_audit(audit_path, audit_station);
    if (*source) {
      roles::run_source({src_ep.endpoint(), src_run_id, src_seed, src_n,
                         optional_path(src_transcript), src_ep.timeout()});
      return 0;
    }
    if (*station) {
      roles::run_station({st_ep.endpoint(), station_from_int(st_id),
                          optional_path(st_transcript), st_ep.timeout()});
      return 0;
    }
    if (*collector) {
      validate(col_config);
      roles::run_collector({col_ep.endpoint(), col_config, {col_out, col_csv},
                            optional_path(col_transcript), col_ep.timeout()});
      return 0;
    }
  } catch (const VerificationFailure& e) {
    std::cerr << "eprsim: " << e.what() << "\n";
    return exit_value(ExitCode::kVerification);
  } catch (const wire::WireError& e) {
    std::cerr << "eprsim: protocol error: " << e.what() << "\n";
    return exit_value(ExitCode::kProtocol);
  } catch (const wire::ProtocolError& e) {
    std::cerr << "eprsim: protocol error: " << e.what() << "\n";
    return exit_value(ExitCode::kProtocol);
  } catch (const net::NetError& e) {
    std::cerr << "eprsim: network error: " << e.what() << "\n";
    return exit_value(ExitCode::kIo);
  } catch (const std::invalid_argument& e) {
    std::cerr << "eprsim: config error: " << e.what() << "\n";
    return exit_value(ExitCode::kConfig);
  } catch (const std::exception& e) {
    std::cerr << "eprsim: " << e.what() << "\n";
    return exit_value(ExitCode::kIo);
  }
  return exit_value(ExitCode::kFailure);
}
