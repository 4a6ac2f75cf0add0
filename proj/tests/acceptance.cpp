// One PASS/FAIL line per acceptance criterion on the default grids.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include <awig/checks.hpp>

namespace {

struct Criterion {
    int id;
    const char* title;
    const char* suite;
};

constexpr Criterion criteria[] = {
    {1, "Moyal orthogonality", "orthogonality"},
    {2, "marginals", "marginals"},
    {3, "finite support", "support"},
    {4, "covariance", "covariance"},
    {5, "scalogram convolution", "convolution"},
    {6, "Mellin factorization", "mellin-factorization"},
    {7, "ambiguity peak", "ambiguity"},
    {8, "uncertainty bounds", "uncertainty"},
    {9, "quantization isometry (k = 16)", "quantize"},
    {10, "best Wigner approximation", "approximation"},
    {11, "Grossmann-Royer operator", "groyer"},
    {12, "trace formula", "trace"},
    {13, "poly-analytic decomposition", "polyan"},
    {14, "positivity", "positivity"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria on the default grids"};
    std::vector<int> only;
    std::string json_out;
    int nthreads = 1;
    app.add_option("--only", only, "criterion numbers to run (default: all)")->check(CLI::Range(1, 14));
    app.add_option("--json", json_out, "write all reports to this file");
    app.add_option("--threads", nthreads, "worker threads")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);
    awig::set_threads(nthreads);

    const awig::checks::Config cfg;
    nlohmann::json all = nlohmann::json::array();
    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        bool pass = false;
        std::string line;
        try {
            const awig::checks::Report r = awig::checks::run(c.suite, cfg);
            pass = r.pass;
            char buf[256];
            std::snprintf(buf, sizeof buf, "max_error=%.3e tolerance=%.3e time=%.1fs", r.max_error, r.tolerance, r.seconds);
            line = buf;
            nlohmann::json j = r.to_json();
            j["criterion"] = c.id;
            all.push_back(j);
            if (c.id == 13) {
                const auto& d = r.details;
                std::snprintf(buf, sizeof buf, " reconstruction=%.3e isometry=%.1e roundtrip=%.1e orthogonality=%.1e dbar2=%.3e",
                              d.value("reconstruction_error", 0.0), d.value("isometry_error", 0.0),
                              d.value("roundtrip_error", 0.0), d.value("orthogonality_error", 0.0),
                              d.value("dbar_order2", 0.0));
                line += buf;
            }
        } catch (const std::exception& e) {
            line = std::string("error: ") + e.what();
        }
        if (!pass) ++failed;
        std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.title << "): " << line << std::endl;
    }
    if (!json_out.empty()) awig::io::write_json(json_out, all);
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
