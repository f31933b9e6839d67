// qpreth command-line driver: qpreth <subcommand> <config.toml> [section.key=value ...]
//
// Subcommands: gamma | heating | normalform | lattice | sweep
// Exit codes: 0 success, 1 assertion failure, 2 configuration error, 3 numerical abort.

#include <iostream>

#include "qpreth/experiments.hpp"

namespace {

void usage(std::ostream& os) {
    os << "usage: qpreth <gamma|heating|normalform|lattice|sweep> <config> [section.key=value ...]\n"
       << "       outputs land in [run].output_dir (default out/<subcommand>)\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace qpreth;
    if (argc >= 2 && (std::string(argv[1]) == "-h" || std::string(argv[1]) == "--help")) {
        usage(std::cout);
        return 0;
    }
    if (argc < 3) {
        usage(std::cerr);
        return 2;
    }
    std::string command = argv[1];
    std::string config_path = argv[2];
    std::vector<std::string> overrides(argv + 3, argv + argc);

    try {
        Config cfg = Config::parse_file(config_path);
        cfg.apply_overrides(overrides);
        std::string out_dir = cfg.text_or("run", "output_dir", "out/" + command);
        RunReport rep = run_experiment(command, cfg, out_dir);
        for (const auto& a : rep.assertions) {
            std::cout << (a.passed ? "[ ok ] " : "[FAIL] ") << a.name
                      << (a.certified ? "" : " (below floor, not certified)")
                      << (a.detail.empty() ? "" : ": " + a.detail) << "\n";
        }
        std::cout << "manifest: " << rep.out_dir << "/run_manifest.json\n";
        return rep.exit_code;
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numerical abort: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
