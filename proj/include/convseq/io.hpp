#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "convseq/energy.hpp"
#include "convseq/errors.hpp"
#include "convseq/incidence.hpp"
#include "convseq/partition.hpp"
#include "convseq/scalar.hpp"

namespace convseq {

using Json = nlohmann::ordered_json;

// Fixed-format doubles keep outputs byte-identical across runs.
inline std::string format_double(double v, const char* fmt = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

// Scalars that fit 64 bits become JSON numbers; larger ones decimal strings.
inline Json scalar_to_json(const Scalar& v) {
    if (auto v64 = to_int64(v)) return Json(*v64);
    return Json(v.str());
}

// Leading comment block: "# key: value" lines, schema first.
using MetaBlock = std::vector<std::pair<std::string, std::string>>;

inline void write_meta(std::ostream& out, const MetaBlock& meta) {
    out << "# schema: 1\n";
    for (const auto& [key, value] : meta) out << "# " << key << ": " << value << "\n";
}

inline void write_csv(std::ostream& out, const MetaBlock& meta,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    write_meta(out, meta);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

struct CsvTable {
    std::map<std::string, std::string> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw domain_error("csv column '" + name + "' not found");
    }
    bool has_column(const std::string& name) const {
        for (const auto& h : header)
            if (h == name) return true;
        return false;
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

inline CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool saw_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto colon = line.find(':');
            if (colon != std::string::npos) {
                std::string key = line.substr(1, colon - 1);
                std::string value = line.substr(colon + 1);
                key.erase(0, key.find_first_not_of(' '));
                value.erase(0, value.find_first_not_of(' '));
                table.meta[key] = value;
            }
            continue;
        }
        if (!saw_header) {
            table.header = split_csv_line(line);
            saw_header = true;
        } else {
            auto row = split_csv_line(line);
            if (row.size() != table.header.size())
                throw validation_error("csv row width mismatch", lineno);
            table.rows.push_back(std::move(row));
        }
    }
    if (!saw_header) throw domain_error("csv input has no header row");
    return table;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open csv file '" + path + "'");
    return read_csv(in);
}

inline Json fit_to_json(const ExponentFit& fit) {
    Json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["max_residual"] = fit.max_residual;
    Json points = Json::array();
    for (const auto& [n, value] : fit.points) points.push_back(Json::array({n, value}));
    j["points"] = points;
    return j;
}

inline Json arrangement_to_json(const Arrangement& arr) {
    Json j;
    Json gen = Json::array();
    for (const Scalar& v : arr.generator()) gen.push_back(scalar_to_json(v));
    j["generator"] = gen;
    Json curves = Json::array();
    for (const Curve& c : arr.curves())
        curves.push_back(Json::array({c.j, scalar_to_json(c.u), c.weight}));
    j["curves"] = curves;
    Json points = Json::array();
    for (const MarkedPoint& p : arr.points())
        points.push_back(Json::array({p.k, scalar_to_json(p.c), p.weight}));
    j["points"] = points;
    return j;
}

inline Json partition_to_json(const PartitionReport& report) {
    Json j;
    j["epsilon"] = to_double(report.epsilon);
    j["epsilon_exact"] = report.epsilon.str();
    j["M"] = report.M;
    j["class_cap"] = report.class_cap;
    j["stop"] = stop_name(report.stop);
    Json delta = Json::array(), delta_exact = Json::array();
    for (const Rational& dl : report.delta) {
        delta.push_back(to_double(dl));
        delta_exact.push_back(dl.str());
    }
    j["delta"] = delta;
    j["delta_exact"] = delta_exact;
    Json classes = Json::array();
    for (const PartitionClass& cls : report.classes) {
        Json c;
        c["mu_i"] = cls.threshold;
        c["m_i"] = cls.mass;
        c["size"] = cls.end - cls.begin;
        c["I_tilde_i"] = cls.i_tilde;
        c["target_m_i"] = cls.target_mass;
        c["max_weight"] = cls.max_member_weight;
        c["budget_ok"] = cls.budget_ok;
        classes.push_back(c);
    }
    j["classes"] = classes;
    j["I_tilde"] = report.i_tilde;
    j["I_bar"] = report.i_bar;
    j["mu_bar"] = report.mu_bar;
    return j;
}

// One step per line, self-contained records for streaming consumers.
inline void write_trace_jsonl(std::ostream& out, const std::vector<RearrangeStep>& trace) {
    for (const RearrangeStep& s : trace) {
        Json j;
        j["side"] = std::string(1, s.side);
        j["move"] = s.swap ? "swap" : "shift";
        j["a"] = s.a;
        j["b"] = s.b;
        j["removed"] = s.removed;
        j["incidences_before"] = scalar_to_json(s.before);
        j["incidences_after"] = scalar_to_json(s.after);
        out << j.dump() << "\n";
    }
}

}  // namespace convseq
