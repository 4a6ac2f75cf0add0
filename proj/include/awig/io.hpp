#ifndef AWIG_IO_HPP
#define AWIG_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mellin.hpp"
#include "quantize.hpp"

namespace awig::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline fs::path sidecar_path(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension(".json");
    return p;
}

inline void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw validation_error("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw numerical_error("write failed: " + path.string());
}

inline std::string read_text(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw validation_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline json read_json(const fs::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw validation_error(path.string() + ": " + e.what());
    }
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json grid_json(const LogGrid& g) { return {{"t_min", g.t_min}, {"dt", g.dt}, {"nt", g.n}}; }

inline json affine_json(const AffineGrid& g) {
    json j = grid_json(g.log_axis);
    j["x_min"] = g.x_min;
    j["dx"] = g.dx;
    j["nx"] = g.nx;
    return j;
}

namespace detail {

// Numeric CSV rows after a fixed header line.
inline std::vector<std::vector<double>> parse_csv(const fs::path& path, const std::string& header, std::size_t cols) {
    std::ifstream is(path);
    if (!is) throw validation_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw validation_error(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw validation_error(path.string() + ": expected header '" + header + "'");
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<double> r;
        const char* p = line.c_str();
        for (std::size_t c = 0; c < cols; ++c) {
            char* end = nullptr;
            const double v = std::strtod(p, &end);
            if (end == p) throw validation_error(path.string() + ":" + std::to_string(lineno) + ": malformed number");
            r.push_back(v);
            p = end;
            if (c + 1 < cols) {
                if (*p != ',') throw validation_error(path.string() + ":" + std::to_string(lineno) + ": expected ','");
                ++p;
            }
        }
        while (*p == ' ' || *p == '\r') ++p;
        if (*p != '\0') throw validation_error(path.string() + ":" + std::to_string(lineno) + ": trailing data");
        rows.push_back(std::move(r));
    }
    return rows;
}

inline double get_num(const json& j, const char* key, const fs::path& where) {
    if (!j.contains(key) || !j[key].is_number()) throw validation_error(where.string() + ": sidecar lacks '" + key + "'");
    return j[key].get<double>();
}

inline std::size_t get_count(const json& j, const char* key, const fs::path& where) {
    if (!j.contains(key) || !j[key].is_number_unsigned() || j[key].get<std::size_t>() == 0)
        throw validation_error(where.string() + ": sidecar needs a positive integer '" + key + "'");
    return j[key].get<std::size_t>();
}

// Checks that a stored axis value agrees with the sidecar grid.
inline void check_axis(double stored, double expect, double step, const fs::path& where) {
    if (std::abs(stored - expect) > 1e-9 * std::max(1.0, std::abs(step)) + 1e-12 * std::abs(expect))
        throw validation_error(where.string() + ": axis column disagrees with the sidecar grid");
}

}  // namespace detail

inline void write_signal(const fs::path& path, const HalfLineSignal& f, const std::string& kind = "signal") {
    std::string s = "t,re,im\n";
    for (std::size_t j = 0; j < f.size(); ++j)
        s += fmt17(f.grid.t(j)) + ',' + fmt17(f[j].real()) + ',' + fmt17(f[j].imag()) + '\n';
    write_text(path, s);
    json side = grid_json(f.grid);
    side["kind"] = kind;
    side["norm_convention"] = "right-haar";
    write_json(sidecar_path(path), side);
}

inline HalfLineSignal read_signal(const fs::path& path) {
    const auto rows = detail::parse_csv(path, "t,re,im", 3);
    if (rows.empty()) throw validation_error(path.string() + ": no samples");
    LogGrid g;
    const fs::path side = sidecar_path(path);
    if (fs::exists(side)) {
        const json j = read_json(side);
        g = LogGrid(detail::get_num(j, "t_min", side), detail::get_num(j, "dt", side), detail::get_count(j, "nt", side));
    } else {
        require(rows.size() >= 2, path.string() + ": need at least two samples without a sidecar");
        g = LogGrid::from_range(rows.front()[0], rows.back()[0], rows.size());
    }
    if (rows.size() != g.n) throw validation_error(path.string() + ": row count does not match the grid");
    cvec v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        detail::check_axis(rows[j][0], g.t(j), g.dt, path);
        v[j] = cplx(rows[j][1], rows[j][2]);
    }
    return HalfLineSignal(g, std::move(v));
}

inline void write_map(const fs::path& path, const AffineMap& F, const std::string& kind = "map") {
    const AffineGrid& g = F.agrid;
    std::string s = "x,t,re,im\n";
    s.reserve(g.size() * 80);
    for (std::size_t i = 0; i < g.nx; ++i) {
        const std::string xs = fmt17(g.x(i)) + ',';
        for (std::size_t j = 0; j < g.nt(); ++j)
            s += xs + fmt17(g.log_axis.t(j)) + ',' + fmt17(F(i, j).real()) + ',' + fmt17(F(i, j).imag()) + '\n';
    }
    write_text(path, s);
    json side = affine_json(g);
    side["kind"] = kind;
    side["norm_convention"] = "right-haar";
    write_json(sidecar_path(path), side);
}

inline AffineMap read_map(const fs::path& path) {
    const fs::path side = sidecar_path(path);
    if (!fs::exists(side)) throw validation_error(path.string() + ": map files need their JSON sidecar");
    const json j = read_json(side);
    const LogGrid la(detail::get_num(j, "t_min", side), detail::get_num(j, "dt", side), detail::get_count(j, "nt", side));
    const AffineGrid g(detail::get_num(j, "x_min", side), detail::get_num(j, "dx", side), detail::get_count(j, "nx", side), la);
    const auto rows = detail::parse_csv(path, "x,t,re,im", 4);
    if (rows.size() != g.size()) throw validation_error(path.string() + ": row count does not match the grid");
    cvec v(g.size());
    for (std::size_t q = 0; q < rows.size(); ++q) {
        const std::size_t i = q / g.nt(), jj = q % g.nt();
        detail::check_axis(rows[q][0], g.x(i), g.dx, path);
        detail::check_axis(rows[q][1], la.t(jj), la.dt, path);
        v[q] = cplx(rows[q][2], rows[q][3]);
    }
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw validation_error(path.string() + ": non-finite value");
    return AffineMap(g, std::move(v));
}

inline void write_spectrum(const fs::path& path, const MellinSpectrum& M) {
    std::string s = "x,re,im\n";
    for (std::size_t k = 0; k < M.nx; ++k)
        s += fmt17(M.x(k)) + ',' + fmt17(M.values[k].real()) + ',' + fmt17(M.values[k].imag()) + '\n';
    write_text(path, s);
    write_json(sidecar_path(path), {{"x_min", M.x_min},
                                    {"dx", M.dx},
                                    {"nx", M.nx},
                                    {"kind", "mellin"},
                                    {"periodization_warning", M.periodization_warning},
                                    {"norm_convention", "right-haar"}});
}

// Sidecar "kind" of a data file, or empty when there is none.
inline std::string file_kind(const fs::path& path) {
    const fs::path side = sidecar_path(path);
    if (!fs::exists(side)) return {};
    const json j = read_json(side);
    return j.value("kind", std::string{});
}

inline bool is_map_file(const fs::path& path) {
    const fs::path side = sidecar_path(path);
    return fs::exists(side) && read_json(side).contains("nx");
}

inline json complex_matrix_json(const Eigen::MatrixXcd& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back({M(r, c).real(), M(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline json operator_json(const OperatorMatrix& M) {
    return {{"k", M.k}, {"alpha", M.alpha}, {"hs_norm", M.hs_norm()}, {"entries", complex_matrix_json(M.entries)}};
}

inline OperatorMatrix operator_from_json(const json& j) {
    try {
        OperatorMatrix M(j.at("k").get<int>(), j.at("alpha").get<double>());
        const json& e = j.at("entries");
        require(e.is_array() && e.size() == static_cast<std::size_t>(M.k), "operator JSON: entries must be k rows");
        for (int r = 0; r < M.k; ++r) {
            require(e[r].size() == static_cast<std::size_t>(M.k), "operator JSON: entries must be k columns");
            for (int c = 0; c < M.k; ++c) M.entries(r, c) = cplx(e[r][c].at(0).get<double>(), e[r][c].at(1).get<double>());
        }
        return M;
    } catch (const json::exception& ex) {
        throw validation_error(std::string("operator JSON: ") + ex.what());
    }
}

}  // namespace awig::io

#endif
