#include "schurlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "schurlab/errors.hpp"

namespace schurlab {

namespace {

std::string fmt_double(double x) {
    if (std::isnan(x)) return "\"nan\"";
    if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Scalars and short scalar tuples such as [re, im] pairs.
bool is_small(const Json& v) {
    if (!v.is_structured()) return true;
    if (!v.is_array() || v.size() > 4) return false;
    for (const auto& e : v)
        if (e.is_structured()) return false;
    return true;
}

void write(const Json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(k).dump() + ": ";
                write(v, out, indent + 2);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars and pairs stay on one line.
            bool flat = true;
            for (const auto& v : j) flat = flat && is_small(v);
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    write(j[i], out, indent);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                write(j[i], out, indent + 2);
            }
            out += "\n" + close + "]";
            return;
        }
        case Json::value_t::number_float:
            out += fmt_double(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

}  // namespace

Json Report::to_json() const {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config;
    j["provenance"] = provenance;
    j["passed"] = passed;
    j["summary"] = summary;
    if (!error.is_null()) j["error"] = error;
    if (!cases.empty()) j["cases"] = cases;
    return j;
}

std::string dump_json(const Json& j) {
    std::string out;
    write(j, out, 0);
    out += "\n";
    return out;
}

std::string dump_csv(const CsvTable& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ",";
        out += t.header[i];
    }
    out += "\n";
    char buf[32];
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

void emit(const Report& r, const std::filesystem::path& path, Format format) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoFailure("cannot create " + path.parent_path().string() + ": " + ec.message());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoFailure("cannot open " + path.string());
    f << (format == Format::json ? dump_json(r.to_json()) : dump_csv(r.csv));
    if (!f) throw IoFailure("write failed: " + path.string());
}

std::filesystem::path output_dir(const std::filesystem::path& fallback) {
    const char* env = std::getenv("SCHURLAB_OUTPUT_DIR");
    if (env && *env) return env;
    return fallback;
}

Json number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return x;
}

Json to_json(complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const FourierSeries& s) {
    Json j = Json::array();
    for (const auto& [k, c] : s.coeffs()) j.push_back(Json{{"tuple", k}, {"re", c.real()}, {"im", c.imag()}});
    return j;
}

Json to_json(const NormEstimate& e) {
    Json j;
    j["value"] = e.value;
    Json ws = Json::array();
    for (const auto& w : e.witnesses) {
        Json rows = Json::array();
        for (Eigen::Index r = 0; r < w.entries().rows(); ++r) {
            Json row = Json::array();
            for (Eigen::Index c = 0; c < w.entries().cols(); ++c) row.push_back(to_json(w.entries()(r, c)));
            rows.push_back(std::move(row));
        }
        ws.push_back(std::move(rows));
    }
    j["witnesses"] = std::move(ws);
    j["iterations"] = e.iterations;
    j["seed"] = e.seed;
    j["converged"] = e.converged;
    j["degenerate"] = e.degenerate;
    j["history"] = e.history;
    return j;
}

}  // namespace schurlab
