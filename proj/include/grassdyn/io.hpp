#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "matrix.hpp"
#include "orbit.hpp"
#include "reduction.hpp"
#include "structure.hpp"
#include "subspace.hpp"

namespace grassdyn {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Matrices: JSON array-of-rows, CSV row-per-line
// ---------------------------------------------------------------------------

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw parse_error(what + ": expected a non-empty array of rows");
    const std::size_t rows = j.size(), cols = j.front().size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw parse_error(what + ": row " + std::to_string(i + 1) + " has " +
                              std::to_string(j[i].size()) + " entries, expected " +
                              std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[i][c].is_number())
                throw parse_error(what + ": row " + std::to_string(i + 1) + ", column " +
                                  std::to_string(c + 1) + " is not a number");
            m(i, c) = j[i][c].get<double>();
        }
    }
    m.validate(what.c_str());
    return m;
}

inline std::string matrix_to_csv(const Matrix& m) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << m(i, j);
        }
        os << '\n';
    }
    return os.str();
}

inline Matrix matrix_from_csv(const std::string& text, const std::string& what) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ls, cell, ',')) {
            ++col;
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw parse_error(what + ": line " + std::to_string(lineno) + ", column " +
                                  std::to_string(col) + ": not a number: '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw parse_error(what + ": line " + std::to_string(lineno) + " has " +
                              std::to_string(row.size()) + " cells, expected " +
                              std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw parse_error(what + ": no data rows");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    m.validate(what.c_str());
    return m;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(what + ": " + e.what());
    }
}

/// Loads a matrix from .json or .csv (by extension; JSON otherwise).
inline Matrix load_matrix(const std::string& path) {
    const std::string text = read_file(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        return matrix_from_csv(text, path);
    return matrix_from_json(parse_json(text, path), path);
}

/// A subspace file is a matrix whose columns span the subspace.
inline Subspace load_subspace(const std::string& path) {
    return Subspace::span_of(load_matrix(path));
}

// ---------------------------------------------------------------------------
// Block specs and structures
// ---------------------------------------------------------------------------

inline json blockspec_to_json(const BlockSpec& b) {
    json j;
    j["kind"] = to_string(b.kind);
    j["modulus"] = b.modulus;
    if (b.kind == BlockKind::real) j["angle"] = b.angle;
    j["rho"] = b.rho;
    return j;
}

inline BlockSpec blockspec_from_json(const json& j, const std::string& what) {
    BlockSpec b;
    if (!j.is_object() || !j.contains("kind") || !j.contains("modulus") || !j.contains("rho"))
        throw parse_error(what + ": block needs kind, modulus and rho");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "classical")
        b.kind = BlockKind::classical;
    else if (kind == "real")
        b.kind = BlockKind::real;
    else
        throw parse_error(what + ": unknown block kind '" + kind + "'");
    b.modulus = j["modulus"].get<double>();
    b.rho = j["rho"].get<int>();
    if (b.kind == BlockKind::real) {
        if (!j.contains("angle")) throw parse_error(what + ": real block needs an angle");
        b.angle = j["angle"].get<double>();
    }
    try {
        b.validate();
    } catch (const invalid_input& e) {
        throw parse_error(what + ": " + e.what());
    }
    return b;
}

inline json structure_to_json(const JordanStructure& s) {
    json j;
    json blocks = json::array();
    for (const auto& b : s.blocks) blocks.push_back(blockspec_to_json(b));
    j["blocks"] = std::move(blocks);
    j["N"] = s.ambient_dim;
    j["rho"] = s.rho();
    if (s.transform) j["transform"] = matrix_to_json(*s.transform);
    j["residual"] = s.residual;
    return j;
}

inline JordanStructure structure_from_json(const json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("blocks"))
        throw parse_error(what + ": expected an object with a blocks array");
    JordanStructure s;
    for (const auto& jb : j["blocks"]) s.blocks.push_back(blockspec_from_json(jb, what));
    s.ambient_dim = j.contains("N") ? j["N"].get<std::size_t>() : s.occupied_dim();
    if (j.contains("transform")) s.transform = matrix_from_json(j["transform"], what);
    try {
        s.validate();
    } catch (const invalid_input& e) {
        throw parse_error(what + ": " + e.what());
    }
    return s;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json bound_report_to_json(const BoundReport& r) {
    json j;
    j["rho"] = r.relative_size;
    j["specific"] = r.lower_bound_specific;
    j["universal"] = r.lower_bound_universal;
    j["scale"] = r.normalization_scale;
    return j;
}

/// Timing lives outside this payload so byte-identical reruns stay possible.
inline json density_report_to_json(const DensityReport& r) {
    json j;
    j["targets"] = r.targets;
    j["hits"] = r.hits;
    j["K"] = r.iterate_budget;
    j["epsilon"] = r.epsilon;
    json per = json::array();
    for (const auto& o : r.per_target) {
        json e;
        e["min_distance"] = o.min_distance;
        e["argmin_iterate"] = o.argmin_iterate;
        per.push_back(std::move(e));
    }
    j["per_target"] = std::move(per);
    j["empirical"] = true; // density evidence, never a proof
    return j;
}

inline json reduced_basis_to_json(const ReducedBasis& rb, const ReductionReport& rep) {
    json j;
    json vecs = json::array();
    for (const auto& v : rb.vectors) vecs.push_back(v);
    j["vectors"] = std::move(vecs);
    j["kappa"] = rb.kappa;
    j["lambda_dims"] = rb.lambda_dims;
    json nt = json::array();
    for (const auto& e : rb.near_threshold) {
        json ev;
        ev["step"] = e.step;
        ev["ratio"] = e.ratio;
        nt.push_back(std::move(ev));
    }
    json report;
    report["kappa_boundary_ok"] = rep.kappa_boundary_ok;
    report["kappa_steps_ok"] = rep.kappa_steps_ok;
    report["pivot_independence_ok"] = rep.pivot_independence_ok;
    report["staircase_ok"] = rep.staircase_ok;
    report["span_ok"] = rep.span_ok;
    report["worst_staircase_residual"] = rep.worst_staircase_residual;
    report["worst_span_angle"] = rep.worst_span_angle;
    report["near_threshold"] = std::move(nt);
    report["pass"] = rep.pass;
    j["report"] = std::move(report);
    return j;
}

} // namespace grassdyn
