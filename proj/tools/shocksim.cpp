// Command-line front end: parses a run configuration, executes the requested
// mode, and writes the artifact files.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "shocksim/config.hpp"
#include "shocksim/errors.hpp"
#include "shocksim/runner.hpp"
#include "shocksim/textio.hpp"
#include "shocksim/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"shocksim: modulated self-similar shock formation simulator"};
    app.set_version_flag("--version", shocksim::kVersion);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "execute a run configuration");
    run->add_option("config", config_path, "path to the key = value config file")
        ->required();
    run->add_option("--set", overrides, "override a key: --set section.key=value")
        ->take_all();
    run->add_option("--out", out_dir, "output directory (overrides output.dir)");
    run->add_flag("--quiet", quiet, "suppress progress output");
    app.require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        shocksim::RunConfig cfg = shocksim::parse_config_file(config_path, overrides);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        cfg.quiet = quiet;
        if (!quiet)
            std::fprintf(stderr, "shocksim %s: mode=%s out=%s config=%s\n",
                         shocksim::kVersion, shocksim::mode_name(cfg.mode).c_str(),
                         cfg.out_dir.c_str(),
                         shocksim::hex64(shocksim::fnv1a(cfg.canonical)).c_str());
        return shocksim::run(cfg);
    } catch (const shocksim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const shocksim::SimError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
