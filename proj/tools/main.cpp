#include "commands.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "dicke/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <unistd.h>

namespace {

bool use_color() { return ::isatty(STDERR_FILENO) && std::getenv("NO_COLOR") == nullptr; }

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch == '\n' ? ' ' : ch;
  }
  return out;
}

int report_error(const dicke::Error& e) {
  const bool color = use_color();
  std::cerr << (color ? "\033[31merror\033[0m" : "error") << ": kind=" << dicke::to_string(e.kind())
            << " field=" << (e.field().empty() ? "-" : e.field()) << " message=\"" << escape(e.what()) << "\"\n";
  return e.kind() == dicke::ErrorKind::Config ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-classical overlap of the Dicke model"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  int threads = 0;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", overrides, "override a key, e.g. --set model.n_atoms=50");
  app.add_option("--out", out_path, "CSV destination (default stdout)");
  app.add_option("--threads", threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  app.fallthrough();

  const char* help[] = {"zero-temperature Delta over lambda for each N", "finite-temperature Delta on a lambda x T grid",
                        "spin-squeezing entanglement witnesses", "effective theory against exact diagonalization",
                        "critical exponent of Delta below lambda_c", "critical couplings and temperatures"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < dicke::cli::command_names().size(); ++i)
    subs.push_back(app.add_subcommand(dicke::cli::command_names()[i], help[i]));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string command;
  for (auto* s : subs)
    if (s->parsed()) command = s->get_name();

  try {
    dicke::cli::Config user;
    if (!config_path.empty()) user = dicke::cli::Config::load(config_path);
    for (const auto& o : overrides) user.apply_override(o);
    if (!out_path.empty()) user.set("output.csv", out_path, "--out");
    const std::string csv_path = user.has("output.csv") ? user.get_string("output.csv") : "";
    if (!csv_path.empty()) dicke::cli::check_writable(csv_path);

    const auto result = dicke::cli::run_command(command, user, threads);
    if (csv_path.empty()) {
      dicke::cli::write_output("", result.csv);
      std::cerr << result.report;
    } else {
      dicke::cli::write_output(csv_path, result.csv);
      std::cout << result.report;
    }
    return 0;
  } catch (const dicke::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    return report_error(dicke::Error(dicke::ErrorKind::Internal, e.what(), ""));
  }
}
