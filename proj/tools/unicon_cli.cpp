// Command-line front end: verify, tensors, cases, ablate.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "unicon/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw unicon::SchemaError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unicon: unified connection toolkit"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "pretty"}));

  std::string config_path;
  std::string corrupt_term;
  std::optional<double> tolerance;

  auto* verify = app.add_subcommand("verify", "Check every identity at the configured points");
  verify->add_option("--config", config_path, "Run configuration (JSON)")->required();
  verify->add_option("--tolerance", tolerance, "Override every tolerance");
  verify->add_option("--corrupt-term", corrupt_term, "Flip the sign of one H term or curvature term group");

  auto* tensors = app.add_subcommand("tensors", "Dump g, Gamma, Gamma~, T~, nabla~ g and R~ at each point");
  tensors->add_option("--config", config_path, "Run configuration (JSON)")->required();

  auto* cases = app.add_subcommand("cases", "List the particular cases");

  auto* ablate = app.add_subcommand("ablate", "Curvature term-group contributions and failure localization");
  ablate->add_option("--config", config_path, "Run configuration (JSON)")->required();
  ablate->add_option("--corrupt-term", corrupt_term, "Flip the sign of one H term or curvature term group");

  for (auto* sub : {verify, tensors, cases, ablate}) {
    sub->add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "pretty"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    unicon::CommandResult result;
    const auto format = [&](unicon::OutputFormat fallback) {
      if (output == "pretty") return unicon::OutputFormat::kPretty;
      if (output == "json") return unicon::OutputFormat::kJson;
      return fallback;
    };
    if (cases->parsed()) {
      result = unicon::cmd_cases(format(unicon::OutputFormat::kJson));
    } else {
      unicon::RunConfig cfg = unicon::parse_config(read_file(config_path));
      cfg.output = format(cfg.output);
      if (tolerance) {
        if (!(*tolerance > 0.0)) throw unicon::BadParams("--tolerance must be positive");
        cfg.tolerances.set_all(*tolerance);
      }
      if (verify->parsed()) result = unicon::cmd_verify(cfg, corrupt_term);
      else if (tensors->parsed()) result = unicon::cmd_tensors(cfg);
      else result = unicon::cmd_ablate(cfg, corrupt_term);
    }
    std::cout << result.output;
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
