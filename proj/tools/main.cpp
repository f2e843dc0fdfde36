#include <fstream>
#include <iostream>
#include <vector>

#include "conespec/cli.hpp"
#include "conespec/reports.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const auto res = conespec::cli::run_cli(args);
    if (!res.error.empty()) {
        std::cerr << res.error << "\n";
        return res.exit_code;
    }

    // locate --out/--format again from the raw args for the output channel
    std::string out_path, format = "json";
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--out") out_path = args[i + 1];
        if (args[i] == "--format") format = args[i + 1];
    }
    const std::string payload = (format == "csv") ? conespec::report::to_csv(res.report)
                                                  : res.report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open output path: " << out_path << "\n";
            return conespec::cli::kInternalError;
        }
        f << payload;
    }
    return res.exit_code;
}
