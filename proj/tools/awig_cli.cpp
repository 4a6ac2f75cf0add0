// awig: synthesis, transforms, quantization and property checks from the command line.
//
// Exit codes: 0 ok, 1 validation, 2 numerical, 3 suite failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include <awig/checks.hpp>

namespace {

using namespace awig;
using json = nlohmann::json;
namespace fs = std::filesystem;

struct RunConfig {
    std::vector<double> grid{-12.0, 8.0, 2048};
    std::vector<double> ugrid{16.0, 2048};
    std::vector<double> basis{16, 1.0};
    std::string out;
    std::string cache;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<std::string> tol;

    static bool pow2(double v) {
        if (v < 1 || v != std::floor(v)) return false;
        auto n = static_cast<std::uint64_t>(v);
        return (n & (n - 1)) == 0;
    }

    LogGrid log_grid() const {
        require(grid.size() == 3, "--grid expects t_min,t_max,n");
        require(grid[0] < grid[1], "--grid: need t_min < t_max");
        require(pow2(grid[2]) && grid[2] >= 2, "--grid: n must be a power of two");
        return LogGrid::from_range(grid[0], grid[1], static_cast<std::size_t>(grid[2]));
    }
    UGrid u_grid() const {
        require(ugrid.size() == 2, "--ugrid expects u_max,m");
        require(ugrid[0] > 0.0 && std::isfinite(ugrid[0]), "--ugrid: u_max must be positive");
        require(pow2(ugrid[1]) && ugrid[1] >= 2, "--ugrid: m must be a power of two");
        return UGrid(ugrid[0], static_cast<std::size_t>(ugrid[1]));
    }
    int k() const {
        require(basis.size() == 2 && basis[0] >= 1 && basis[0] == std::floor(basis[0]), "--basis expects k,alpha with k >= 1");
        return static_cast<int>(basis[0]);
    }
    double alpha() const {
        require(basis.size() == 2 && basis[1] > -1.0, "--basis: alpha must exceed -1");
        return basis[1];
    }
    std::map<std::string, double> tolerances() const {
        std::map<std::string, double> m;
        for (const auto& s : tol) {
            const auto eq = s.find('=');
            require(eq != std::string::npos && eq > 0, "--tol expects NAME=VALUE");
            char* end = nullptr;
            const std::string v = s.substr(eq + 1);
            const double d = std::strtod(v.c_str(), &end);
            require(end != v.c_str() && *end == '\0' && d >= 0.0, "--tol: bad value in '" + s + "'");
            m[s.substr(0, eq)] = d;
        }
        return m;
    }
    std::string cache_dir() const {
        if (!cache.empty()) return cache;
        const char* env = std::getenv("AWIG_CACHE");
        return env ? std::string(env) : std::string{};
    }
    std::string out_or(const std::string& fallback) const { return out.empty() ? fallback : out; }

    void validate() const {
        log_grid();
        u_grid();
        k();
        alpha();
        tolerances();
    }
};

std::vector<double> pair_arg(const std::vector<double>& v, const char* what) {
    require(v.size() == 2, std::string(what) + " expects two comma-separated numbers");
    return v;
}

int cmd_synth(const RunConfig& rc, const std::string& kind, double s, int n, double alpha, const std::vector<double>& C,
              const std::vector<double>& beta, const std::vector<double>& gamma, const std::vector<double>& supp) {
    const LogGrid g = rc.log_grid();
    HalfLineSignal f;
    json params;
    if (kind == "morse") {
        f = morse_state(s, g);
        params = {{"s", s}};
    } else if (kind == "laguerre") {
        f = laguerre_state(LaguerreSpec(n, alpha), g);
        params = {{"n", n}, {"alpha", alpha}};
    } else if (kind == "klauder") {
        const auto c = pair_arg(C, "--C"), b = pair_arg(beta, "--beta"), y = pair_arg(gamma, "--gamma");
        f = klauder_state(cplx(c[0], c[1]), cplx(b[0], b[1]), cplx(y[0], y[1]), g);
        params = {{"C", c}, {"beta", b}, {"gamma", y}};
    } else if (kind == "bump") {
        const auto p = pair_arg(supp, "--support");
        f = bump_state(p[0], p[1], g);
        params = {{"support", p}};
    } else {
        throw validation_error("synth: unknown kind '" + kind + "'");
    }
    const fs::path out = rc.out_or(kind + ".csv");
    io::write_signal(out, f, kind);
    json side = io::read_json(io::sidecar_path(out));
    side["params"] = params;
    io::write_json(io::sidecar_path(out), side);
    std::cout << json{{"file", out.string()}, {"norm2", f.norm2()}}.dump() << "\n";
    return 0;
}

int cmd_transform(const RunConfig& rc, const std::string& kind, const std::vector<std::string>& inputs,
                  const std::vector<double>& at) {
    require(!inputs.empty() && inputs.size() <= 2, "transform: expects one or two input files");
    const HalfLineSignal psi = io::read_signal(inputs[0]);
    const HalfLineSignal phi = inputs.size() == 2 ? io::read_signal(inputs[1]) : psi;
    require(psi.grid == phi.grid, "transform: inputs live on different grids");
    const fs::path out = rc.out_or(kind + ".csv");
    if (kind == "mellin") {
        io::write_spectrum(out, mellin_forward(psi));
    } else if (kind == "groyer") {
        const auto p = pair_arg(at, "--at");
        io::write_signal(out, grossmann_royer_apply(GroupElement(p[0], p[1]), psi), "groyer");
    } else {
        const UGrid ug = rc.u_grid();
        AffineMap F;
        if (kind == "wigner") {
            F = affine_wigner(psi, phi, ug);
        } else if (kind == "ambiguity") {
            F = affine_ambiguity(psi, phi);
        } else if (kind == "wigner-via-ambiguity") {
            F = wigner_via_ambiguity(psi, phi, ug);
        } else if (kind == "scalogram-conv") {
            // window psi, analysed signal phi
            F = scalogram_via_convolution(phi, psi, ug);
        } else if (kind == "scalogram-direct") {
            F = AffineMap(ug.affine_grid(psi.grid));
            std::vector<GroupElement> pts;
            pts.reserve(F.agrid.size());
            for (std::size_t i = 0; i < F.nx(); ++i)
                for (std::size_t j = 0; j < F.nt(); ++j) pts.emplace_back(F.agrid.x(i), psi.grid.a(j));
            const std::vector<double> v = scalogram_direct(phi, psi, pts);
            for (std::size_t q = 0; q < v.size(); ++q) F.values[q] = v[q];
        } else {
            throw validation_error("transform: unknown kind '" + kind + "'");
        }
        io::write_map(out, F, kind);
    }
    std::cout << json{{"file", out.string()}, {"kind", kind}}.dump() << "\n";
    return 0;
}

std::unique_ptr<BasisCache> make_cache(const RunConfig& rc) {
    const std::string dir = rc.cache_dir();
    return dir.empty() ? nullptr : std::make_unique<BasisCache>(dir);
}

int cmd_quantize(const RunConfig& rc, const std::string& symbol) {
    const AffineMap f = io::read_map(symbol);
    auto cache = make_cache(rc);
    const OperatorMatrix M = quantize_symbol(f, rc.k(), rc.alpha(), cache.get());
    const fs::path out = rc.out_or("operator.json");
    io::write_json(out, io::operator_json(M));
    std::cout << json{{"file", out.string()}, {"hs_norm", M.hs_norm()}, {"symbol_norm", f.norm()}}.dump() << "\n";
    return 0;
}

int cmd_approx(const RunConfig& rc, const std::string& symbol) {
    const AffineMap f = io::read_map(symbol);
    auto cache = make_cache(rc);
    const ApproximationResult a = wigner_approximation(f, rc.k(), rc.alpha(), cache.get());
    const fs::path out = rc.out_or("approx.json");
    json files = json::array();
    for (std::size_t q = 0; q < a.minimizers.size(); ++q) {
        fs::path p = out;
        p.replace_filename(out.stem().string() + "_minimizer" + std::to_string(q) + ".csv");
        io::write_signal(p, a.minimizers[q], "minimizer");
        files.push_back(p.filename().string());
    }
    json ev = json::array();
    for (Eigen::Index j = 0; j < a.eigenvalues.size(); ++j) ev.push_back(a.eigenvalues(j));
    json j = {{"distance", a.distance},
              {"lambda_max_plus", a.lambda_max_plus},
              {"multiplicity", a.multiplicity},
              {"zero_minimizer", a.zero_minimizer},
              {"symbol_norm2", a.symbol_norm2},
              {"eigenvalues", ev},
              {"corollary_applies", a.corollary_applies},
              {"minimizers", files},
              {"k", rc.k()},
              {"alpha", rc.alpha()}};
    if (a.corollary_applies) j["corollary_distance"] = a.corollary_distance;
    io::write_json(out, j);
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_check(const RunConfig& rc, const std::string& suite) {
    checks::Config cfg;
    cfg.grid = rc.log_grid();
    cfg.ug = rc.u_grid();
    cfg.k = rc.k();
    cfg.alpha = rc.alpha();
    cfg.seed = rc.seed;
    cfg.tol = rc.tolerances();
    cfg.cache_dir = rc.cache_dir();
    auto cache = make_cache(rc);
    std::vector<std::string> names;
    if (suite == "all")
        for (const auto& [n, fn] : checks::registry()) names.push_back(n);
    else
        names.push_back(suite);
    json reports = json::array();
    bool ok = true;
    for (const auto& n : names) {
        const checks::Report r = checks::run(n, cfg, cache.get());
        std::cerr << (r.pass ? "PASS " : "FAIL ") << n << " max_error=" << r.max_error << " tolerance=" << r.tolerance
                  << " (" << r.seconds << " s)\n";
        reports.push_back(r.to_json());
        ok = ok && r.pass;
    }
    const json doc = names.size() == 1 ? reports.front() : json{{"suite", "all"}, {"pass", ok}, {"reports", reports}};
    if (!rc.out.empty()) io::write_json(rc.out, doc);
    std::cout << doc.dump(2) << "\n";
    return ok ? 0 : 3;
}

int cmd_cache(const RunConfig& rc, const std::string& action) {
    const std::string dir = rc.cache_dir();
    require(!dir.empty(), "cache: set --cache or AWIG_CACHE");
    BasisCache cache(dir);
    if (action == "clear") {
        const std::size_t n = cache.clear_disk();
        std::cout << json{{"directory", dir}, {"removed", n}}.dump() << "\n";
        return 0;
    }
    require(action == "warm", "cache: action must be clear or warm");
    const LogGrid g = rc.log_grid();
    const UGrid ug = rc.u_grid();
    const int k = rc.k();
    BasisCache disk_only(dir, 0);
    detail::for_each_basis_pair(k, rc.alpha(), g, ug, &disk_only, [](int, int, const AffineMap&) {});
    std::cout << json{{"directory", dir}, {"elements", k * (k + 1) / 2}, {"computed", disk_only.computed()}}.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affine Wigner calculus: transforms, quantization and property checks"};
    app.fallthrough();
    app.require_subcommand(1);
    RunConfig rc;
    app.add_option("--grid", rc.grid, "t_min,t_max,n")->delimiter(',')->expected(3);
    app.add_option("--ugrid", rc.ugrid, "u_max,m")->delimiter(',')->expected(2);
    app.add_option("--basis", rc.basis, "k,alpha")->delimiter(',')->expected(2);
    app.add_option("--out", rc.out, "output path");
    app.add_option("--cache", rc.cache, "basis cache directory (default $AWIG_CACHE)");
    app.add_option("--seed", rc.seed, "seed for randomized suites");
    app.add_option("--threads", rc.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--tol", rc.tol, "tolerance override NAME=VALUE")->take_all();

    std::string kind, action, suite, symbol;
    double s = 1.0, alpha = 1.0;
    int n = 0;
    std::vector<double> C{1.0, 0.0}, beta, gamma, supp, at;
    std::vector<std::string> inputs;

    auto* synth = app.add_subcommand("synth", "write a test state");
    synth->add_option("kind", kind, "morse | klauder | laguerre | bump")->required();
    synth->add_option("--s", s, "Morse parameter");
    synth->add_option("--n", n, "Laguerre order");
    synth->add_option("--alpha", alpha, "Laguerre parameter");
    synth->add_option("--C", C, "Klauder amplitude re,im")->delimiter(',')->expected(2);
    synth->add_option("--beta", beta, "Klauder beta re,im")->delimiter(',')->expected(2);
    synth->add_option("--gamma", gamma, "Klauder gamma re,im")->delimiter(',')->expected(2);
    synth->add_option("--support", supp, "bump support lo,hi")->delimiter(',')->expected(2);

    auto* transform = app.add_subcommand("transform", "apply a transform to signal files");
    transform->add_option("kind", kind,
                          "wigner | ambiguity | wigner-via-ambiguity | scalogram-direct | scalogram-conv | mellin | groyer")
        ->required();
    transform->add_option("inputs", inputs, "psi.csv [phi.csv]")->required()->expected(1, 2);
    transform->add_option("--at", at, "group element x,a for groyer")->delimiter(',')->expected(2);

    auto* quant = app.add_subcommand("quantize", "operator matrix of a symbol");
    quant->add_option("symbol", symbol, "symbol map CSV")->required();
    auto* approx = app.add_subcommand("approx", "best Wigner approximation of a real symbol");
    approx->add_option("symbol", symbol, "symbol map CSV")->required();

    auto* check = app.add_subcommand("check", "run a property suite");
    std::vector<std::string> suites{"all"};
    for (const auto& [nm, fn] : checks::registry()) suites.push_back(nm);
    check->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suites));

    auto* cache = app.add_subcommand("cache", "manage the basis cache");
    cache->add_option("action", action, "clear | warm")->required()->check(CLI::IsMember({"clear", "warm"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        rc.validate();
        set_threads(rc.threads);
        if (*synth) return cmd_synth(rc, kind, s, n, alpha, C, beta, gamma, supp);
        if (*transform) return cmd_transform(rc, kind, inputs, at);
        if (*quant) return cmd_quantize(rc, symbol);
        if (*approx) return cmd_approx(rc, symbol);
        if (*check) return cmd_check(rc, suite);
        if (*cache) return cmd_cache(rc, action);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
