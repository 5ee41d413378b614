#include "latticeharm/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace latticeharm {

namespace {

const Json& require_key(const Json& j, const char* key, const char* what) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ValidationError(std::string(what) + ": missing key \"" + key + "\"");
    }
    return *it;
}

Complex complex_from(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) {
        throw ValidationError(std::string(what) + ": complex values are [re, im] pairs");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

Json complex_to(const Complex& z) { return Json::array({z.real(), z.imag()}); }

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void append_value(std::string& out, const Json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string pad_close(static_cast<std::size_t>(indent) * depth, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                append_escaped(out, key);
                out += ": ";
                append_value(out, value, indent, depth + 1);
            }
            out += "\n" + pad_close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // scalar-only arrays stay on one line
            bool flat = true;
            for (const auto& v : j) {
                if (v.is_object() || v.is_array()) flat = false;
            }
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += flat ? ", " : ",";
                if (!flat) out += "\n" + pad;
                first = false;
                append_value(out, v, indent, depth + 1);
            }
            if (!flat) out += "\n" + pad_close;
            out += ']';
            return;
        }
        case Json::value_t::string:
            append_escaped(out, j.get_ref<const std::string&>());
            return;
        case Json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            return;
        case Json::value_t::number_integer: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%" PRId64, j.get<std::int64_t>());
            out += buf;
            return;
        }
        case Json::value_t::number_unsigned: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%" PRIu64, j.get<std::uint64_t>());
            out += buf;
            return;
        }
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            if (!std::isfinite(x)) throw ValidationError("cannot serialize non-finite number");
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            out += buf;
            return;
        }
        case Json::value_t::null:
            out += "null";
            return;
        default:
            throw ValidationError("unsupported JSON value type");
    }
}

}  // namespace

Json basis_to_json(const LatticeBasis& basis) {
    Json rows = Json::array();
    for (int i = 0; i < basis.dim(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < basis.dim(); ++j) row.push_back(basis.matrix()(i, j));
        rows.push_back(std::move(row));
    }
    return Json{{"basis", std::move(rows)}};
}

LatticeBasis basis_from_json(const Json& j) {
    const Json& rows = j.is_object() ? require_key(j, "basis", "basis") : j;
    if (!rows.is_array() || rows.empty()) {
        throw ValidationError("basis: expected a non-empty array of rows");
    }
    const auto d = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
            throw ValidationError("basis: rows must form a square matrix");
        }
        for (Eigen::Index k = 0; k < d; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return LatticeBasis(m);
}

Json series_to_json(const FourierSeries& series) {
    Json coeffs = Json::array();
    for (const auto& [alpha, c] : series.coeffs()) {
        Json idx = Json::array();
        for (const auto v : alpha) idx.push_back(v);
        coeffs.push_back(Json{{"index", std::move(idx)}, {"re", c.real()}, {"im", c.imag()}});
    }
    Json out = basis_to_json(series.lattice());
    out["coefficients"] = std::move(coeffs);
    return out;
}

FourierSeries series_from_json(const Json& j) {
    LatticeBasis basis = basis_from_json(require_key(j, "basis", "series"));
    const Json& coeffs = require_key(j, "coefficients", "series");
    if (!coeffs.is_array()) throw ValidationError("series: coefficients must be an array");
    FourierSeries::CoeffMap map;
    for (const Json& entry : coeffs) {
        const Json& idx = require_key(entry, "index", "series coefficient");
        IndexVec alpha;
        alpha.reserve(idx.size());
        for (const Json& v : idx) alpha.push_back(v.get<std::int64_t>());
        const Complex c(require_key(entry, "re", "series coefficient").get<double>(),
                        require_key(entry, "im", "series coefficient").get<double>());
        if (!map.emplace(std::move(alpha), c).second) {
            throw ValidationError("series: duplicate coefficient index");
        }
    }
    return FourierSeries(std::move(basis), std::move(map));
}

Json samples_to_json(const PeriodicSamples& samples) {
    Json out = basis_to_json(samples.grid.basis());
    out["n"] = samples.grid.points_per_axis();
    Json values = Json::array();
    for (const auto& z : samples.values) values.push_back(complex_to(z));
    out["values"] = std::move(values);
    return out;
}

PeriodicSamples samples_from_json(const Json& j) {
    LatticeBasis basis = basis_from_json(require_key(j, "basis", "samples"));
    const int n = require_key(j, "n", "samples").get<int>();
    const Json& values = require_key(j, "values", "samples");
    std::vector<Complex> v;
    v.reserve(values.size());
    for (const Json& z : values) v.push_back(complex_from(z, "samples"));
    return PeriodicSamples(SampleGrid(std::move(basis), n), std::move(v));
}

Json weight_to_json(const WeightSpec& weight) {
    switch (weight.kind()) {
        case WeightSpec::Kind::Polynomial:
            return Json{{"variant", "polynomial"}, {"t", weight.t()}};
        case WeightSpec::Kind::SubExponential:
            return Json{{"variant", "subexponential"}, {"r", weight.r()}, {"s", weight.s()}};
        case WeightSpec::Kind::Product: {
            Json factors = Json::array();
            for (const auto& f : weight.factors()) factors.push_back(weight_to_json(f));
            return Json{{"variant", "product"}, {"factors", std::move(factors)}};
        }
    }
    throw ValidationError("unknown weight kind");
}

WeightSpec weight_from_json(const Json& j) {
    const std::string variant = require_key(j, "variant", "weight").get<std::string>();
    if (variant == "polynomial") {
        return WeightSpec::polynomial(require_key(j, "t", "weight").get<double>());
    }
    if (variant == "subexponential") {
        return WeightSpec::sub_exponential(require_key(j, "r", "weight").get<double>(),
                                           require_key(j, "s", "weight").get<double>());
    }
    if (variant == "product") {
        const Json& factors = require_key(j, "factors", "weight");
        std::vector<WeightSpec> out;
        for (const Json& f : factors) out.push_back(weight_from_json(f));
        return WeightSpec::product(std::move(out));
    }
    throw ValidationError("weight: unknown variant \"" + variant + "\"");
}

Json report_to_json(const RegularityReport& report) {
    Json out;
    out["variant"] = to_string(report.model.variant);
    out["s"] = report.model.s;
    out["r"] = report.model.r;
    out["N"] = report.model.N;
    out["logC"] = report.model.logC;
    out["residual"] = report.residual;
    out["support"] = report.support;
    out["notes"] = report.notes;
    return out;
}

Json trajectory_to_json(const HeatTrajectory& trajectory) {
    Json times = Json::array();
    for (const double t : trajectory.times) times.push_back(t);
    Json states = Json::array();
    for (const auto& s : trajectory.states) states.push_back(series_to_json(s));
    return Json{{"times", std::move(times)}, {"states", std::move(states)}};
}

Json stft_table_to_json(const GaussianWindow& window, const StftTable& table) {
    Json out;
    out["window"] = Json{{"sigma", window.sigma()}};
    Json xnodes = Json::array();
    for (std::size_t i = 0; i < table.x_grid.size(); ++i) {
        const Eigen::VectorXd x = table.x_grid.node(i);
        Json node = Json::array();
        for (Eigen::Index k = 0; k < x.size(); ++k) node.push_back(x[k]);
        xnodes.push_back(std::move(node));
    }
    out["xNodes"] = std::move(xnodes);
    Json xinodes = Json::array();
    for (std::size_t i = 0; i < table.xi_grid.size(); ++i) {
        const Eigen::VectorXd xi = table.xi_grid.node(i);
        Json node = Json::array();
        for (Eigen::Index k = 0; k < xi.size(); ++k) node.push_back(xi[k]);
        xinodes.push_back(std::move(node));
    }
    out["xiNodes"] = std::move(xinodes);
    Json values = Json::array();
    for (const auto& z : table.values) values.push_back(complex_to(z));
    out["values"] = std::move(values);
    return out;
}

std::string dump_deterministic(const Json& j, int indent) {
    std::string out;
    append_value(out, j, indent, 0);
    out += '\n';
    return out;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace latticeharm
