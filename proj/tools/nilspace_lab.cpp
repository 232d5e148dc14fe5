#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nilspace/groups.hpp"
#include "nilspace/workspace.hpp"

namespace {

constexpr int kParseError = 2;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int run_command(const std::string& path, std::optional<std::uint64_t> budget, const std::string& report_path,
                bool machine) {
  nilspace::Workspace ws;
  nilspace::RunOptions opt;
  try {
    opt.budget = nilspace::resolve_budget(budget, std::getenv("NILSPACE_BUDGET"));
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kParseError;
  }
  try {
    ws = nilspace::load_workspace(path);
  } catch (const std::exception& ex) {
    std::cerr << path << ":" << ex.what() << "\n";
    return kParseError;
  }
  const nilspace::Report report = nilspace::run_workspace(ws, opt);
  const std::string text = report.render(machine, utc_timestamp());
  if (report_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(report_path, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "cannot write report to " << report_path << "\n";
      return 1;
    }
  }
  return report.exit_code();
}

int check_table(const std::string& path) {
  try {
    nilspace::FiniteGroup g = nilspace::load_group_table(path);
    std::cout << "order = " << g.order() << "\n";
    std::cout << "abelian = " << (g.is_abelian() ? "yes" : "no") << "\n";
    if (g.is_abelian()) std::cout << "invariants = " << nilspace::identify_abelian(g).group.to_string() << "\n";
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kParseError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite nilspace verification and computation"};
  app.require_subcommand(1);

  std::string ws_path, report_path, table_path;
  std::optional<std::uint64_t> budget;
  bool machine = false;

  auto* run = app.add_subcommand("run", "Run a workspace file");
  run->add_option("workspace", ws_path, "Workspace file")->required();
  run->add_option("--budget", budget, "Node budget per command")->check(CLI::PositiveNumber);
  run->add_option("--report", report_path, "Write the report to this path");
  run->add_flag("--machine", machine, "Omit the timestamp header");

  auto* check = app.add_subcommand("check-table", "Validate a group table file");
  check->add_option("path", table_path, "Table file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseError;
  }
  if (*run) return run_command(ws_path, budget, report_path, machine);
  return check_table(table_path);
}
