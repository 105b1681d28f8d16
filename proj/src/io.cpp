#include "geodec/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace geodec {

using nlohmann::json;

Matrix matrix_from_json(const json& j, const std::string& name) {
    if (!j.is_array()) throw ParseError("matrix '" + name + "': expected an array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    if (rows > 0) {
        if (!j[0].is_array())
            throw ParseError("matrix '" + name + "', row 1: expected an array of numbers");
        cols = j[0].size();
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array())
            throw ParseError("matrix '" + name + "', row " + std::to_string(i + 1) +
                             ": expected an array of numbers");
        if (j[i].size() != cols)
            throw ParseError("matrix '" + name + "', row " + std::to_string(i + 1) + ": has " +
                             std::to_string(j[i].size()) + " entries, expected " +
                             std::to_string(cols));
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number())
                throw ParseError("matrix '" + name + "', row " + std::to_string(i + 1) +
                                 ", column " + std::to_string(k + 1) + ": not a number");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                j[i][k].get<double>();
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            const double v = m(i, k);
            // Keep integers as integers so hand-written fixtures round-trip.
            if (v == static_cast<double>(static_cast<long long>(v)) && std::abs(v) < 1e15)
                row.push_back(static_cast<long long>(v));
            else
                row.push_back(v);
        }
        rows.push_back(row);
    }
    return rows;
}

json spectrum_to_json(const SpectrumMultiset& s) {
    json out = json::array();
    for (const auto& v : s.sorted()) out.push_back(json::array({v.real(), v.imag()}));
    return out;
}

namespace {

SpectrumMultiset spectrum_from_json(const json& j, const std::string& name) {
    if (!j.is_array()) throw ParseError("'" + name + "': expected an array of [re, im] pairs");
    std::vector<Complex> vals;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ParseError("'" + name + "', entry " + std::to_string(i + 1) +
                             ": expected [re, im]");
        vals.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    SpectrumMultiset s{vals};
    if (!s.is_conjugate_closed())
        throw ParseError("'" + name + "': values are not conjugate-closed");
    return s;
}

const json& required(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing required field '") + key + "'");
    return *it;
}

}  // namespace

PlantFile parse_plant(const json& j) {
    if (!j.is_object()) throw ParseError("plant file: expected a JSON object");
    const Matrix a = matrix_from_json(required(j, "a"), "a");
    const Matrix b = matrix_from_json(required(j, "b"), "b");
    const Matrix h = matrix_from_json(required(j, "h"), "h");
    const Matrix c = matrix_from_json(required(j, "c"), "c");
    const Matrix dy = matrix_from_json(required(j, "d_y"), "d_y");
    const Matrix gy = matrix_from_json(required(j, "g_y"), "g_y");
    const Matrix e = matrix_from_json(required(j, "e"), "e");
    const Matrix dz = matrix_from_json(required(j, "d_z"), "d_z");
    const Matrix gz = matrix_from_json(required(j, "g_z"), "g_z");
    PlantFile out{Plant(a, b, h, c, dy, gy, e, dz, gz), std::nullopt, std::nullopt};
    if (auto it = j.find("tolerances"); it != j.end()) {
        Tolerances t;
        if (auto f = it->find("rank_rel"); f != it->end()) t.rank_rel = f->get<double>();
        if (auto f = it->find("eig_match"); f != it->end()) t.eig_match = f->get<double>();
        if (auto f = it->find("residual"); f != it->end()) t.residual = f->get<double>();
        t.validate();
        out.tolerances = t;
    }
    if (auto it = j.find("target_poles"); it != j.end())
        out.target_poles = spectrum_from_json(*it, "target_poles");
    return out;
}

PlantFile parse_plant_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    try {
        return parse_plant(j);
    } catch (const std::invalid_argument& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

json plant_to_json(const Plant& plant, const std::optional<Tolerances>& tol,
                   const std::optional<SpectrumMultiset>& target_poles) {
    json j;
    j["a"] = matrix_to_json(plant.A);
    j["b"] = matrix_to_json(plant.B);
    j["h"] = matrix_to_json(plant.H);
    j["c"] = matrix_to_json(plant.C);
    j["d_y"] = matrix_to_json(plant.Dy);
    j["g_y"] = matrix_to_json(plant.Gy);
    j["e"] = matrix_to_json(plant.E);
    j["d_z"] = matrix_to_json(plant.Dz);
    j["g_z"] = matrix_to_json(plant.Gz);
    if (tol) {
        j["tolerances"] = {{"rank_rel", tol->rank_rel},
                           {"eig_match", tol->eig_match},
                           {"residual", tol->residual}};
    }
    if (target_poles) j["target_poles"] = spectrum_to_json(*target_poles);
    return j;
}

json controller_to_json(const Controller& c) {
    json j;
    j["a_c"] = matrix_to_json(c.Ac);
    j["b_c"] = matrix_to_json(c.Bc);
    j["c_c"] = matrix_to_json(c.Cc);
    j["d_c"] = matrix_to_json(c.Dc);
    return j;
}

Controller parse_controller(const json& j) {
    if (!j.is_object()) throw ParseError("controller file: expected a JSON object");
    Controller c;
    c.Ac = matrix_from_json(required(j, "a_c"), "a_c");
    c.Bc = matrix_from_json(required(j, "b_c"), "b_c");
    c.Cc = matrix_from_json(required(j, "c_c"), "c_c");
    c.Dc = matrix_from_json(required(j, "d_c"), "d_c");
    if (c.Ac.rows() != c.Ac.cols()) throw ParseError("controller: a_c must be square");
    if (c.Bc.rows() != c.Ac.rows()) throw ParseError("controller: b_c row mismatch");
    if (c.Cc.cols() != c.Ac.cols()) throw ParseError("controller: c_c column mismatch");
    if (c.Dc.rows() != c.Cc.rows() || c.Dc.cols() != c.Bc.cols())
        throw ParseError("controller: d_c shape mismatch");
    return c;
}

Controller parse_controller_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    return parse_controller(j);
}

namespace {

void dump_rec(const json& j, std::string& out, int indent) {
    const std::string pad(2 * static_cast<std::size_t>(indent), ' ');
    const std::string pad_in(2 * static_cast<std::size_t>(indent + 1), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + json(it.key()).dump() + ": ";
                dump_rec(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Flat arrays of numbers stay on one line.
            bool scalars_only = true;
            for (const auto& e : j)
                if (e.is_structured()) scalars_only = false;
            if (scalars_only) {
                out += "[";
                bool first = true;
                for (const auto& e : j) {
                    if (!first) out += ", ";
                    first = false;
                    dump_rec(e, out, indent);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_rec(e, out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
            out += buf;
            return;
        }
        case json::value_t::number_integer: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%" PRId64, j.get<std::int64_t>());
            out += buf;
            return;
        }
        case json::value_t::number_unsigned: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%" PRIu64, j.get<std::uint64_t>());
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_canonical(const json& j) {
    std::string out;
    dump_rec(j, out, 0);
    out += "\n";
    return out;
}

}  // namespace geodec
