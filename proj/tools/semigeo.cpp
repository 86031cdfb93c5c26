#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "semigeo/config.hpp"
#include "semigeo/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Semigeodesic chart reconstruction and checks"};
  std::string mode_text;
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  app.add_option("mode", mode_text,
                 "forward | reconstruct-metric | reconstruct-connection | roundtrip-metric | "
                 "roundtrip-connection | check-chart")
      ->required();
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : semigeo::kExitConfig;
  }

  const auto mode = semigeo::parse_mode(mode_text);
  if (!mode) {
    std::cerr << "error: unknown mode '" << mode_text << "'\n";
    return semigeo::kExitConfig;
  }
  semigeo::RunConfig config;
  try {
    config = semigeo::load_config(std::filesystem::path(config_path), mode);
  } catch (const semigeo::Error& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return semigeo::kExitConfig;
  }
  return semigeo::run(config, out_dir, threads, std::cerr);
}
