#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "flexauction/market.hpp"
#include "flexauction/rng.hpp"
#include "flexauction/scenario.hpp"
#include "flexauction/valuation.hpp"

namespace testutil {

// The CLI path and the fixture directory arrive through the environment so
// the binary runs the same from ctest and by hand (ctest sets both).
inline std::string cli_path() {
    const char* p = std::getenv("FLEXAUCTION_CLI");
    return p ? std::string(p) : std::string();
}

inline std::string scenario_path(const std::string& name) {
    const char* d = std::getenv("FLEXAUCTION_SCENARIOS");
    return (d ? std::string(d) : std::string("scenarios")) + "/" + name;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Run a shell command, capture stdout, decode the exit status. Stderr is
// dropped unless merged; CLI11's usage errors land there.
inline RunResult run_command(const std::string& cmd, bool merge_stderr = false) {
    RunResult r;
    std::string full = cmd + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    return r;
}

inline RunResult run_cli(const std::string& args, bool merge_stderr = false) {
    return run_command(cli_path() + " " + args, merge_stderr);
}

// Fresh directory for files a test writes; left behind for post-mortems.
inline std::filesystem::path temp_dir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "flexauction_test_XXXXXX").string();
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
    return std::filesystem::path(buf.data());
}

inline std::string write_file(const std::filesystem::path& dir, const std::string& name,
                              const std::string& text) {
    std::filesystem::path p = dir / name;
    std::ofstream out(p);
    out << text;
    out.close();
    return p.string();
}

inline std::shared_ptr<flexauction::UniformModel> uniform_model(
    std::vector<double> upper, std::vector<double> prior) {
    return std::make_shared<flexauction::UniformModel>(std::move(upper), std::move(prior));
}

// Random instance stream with the same shape the CLI's oracle-compare uses:
// small populations, up to three classes, free supply in {0,1,2}, separated
// decreasing prices in (0,10], valuations in [-5,15].
struct Instance {
    flexauction::MarketStructure market;
    std::vector<double> w;
    std::vector<int> c;
};

inline Instance draw_instance(std::uint64_t seed, long index, int max_n, int max_k) {
    using flexauction::uniform01;
    std::mt19937_64 gen = flexauction::make_engine(seed, static_cast<std::uint64_t>(index));
    int n = std::min(max_n, 1 + static_cast<int>(uniform01(gen) * max_n));
    int k = std::min(max_k, 1 + static_cast<int>(uniform01(gen) * max_k));

    std::vector<long> m(static_cast<std::size_t>(k));
    for (auto& mi : m) mi = static_cast<long>(uniform01(gen) * 3.0);

    std::vector<double> p(static_cast<std::size_t>(k));
    while (true) {
        for (auto& pi : p) pi = 10.0 * (1.0 - uniform01(gen));
        std::sort(p.begin(), p.end(), std::greater<>());
        bool separated = true;
        for (int i = 0; i + 1 < k; ++i)
            if (p[static_cast<std::size_t>(i + 1)] >= p[static_cast<std::size_t>(i)] - 1e-9)
                separated = false;
        if (separated) break;
    }

    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<int> c(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        w[static_cast<std::size_t>(l)] = -5.0 + 20.0 * uniform01(gen);
        c[static_cast<std::size_t>(l)] = std::min(k, 1 + static_cast<int>(uniform01(gen) * k));
    }
    return {flexauction::MarketStructure(k, std::move(m), std::move(p)), std::move(w),
            std::move(c)};
}

}  // namespace testutil
