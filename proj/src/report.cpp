#include "cbplab/report.hpp"

#include <cstdio>
#include <ostream>

#include "cbplab/errors.hpp"

namespace cbplab {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string field_to_string(const ReportRecord::Field& f, bool json) {
    if (std::holds_alternative<std::string>(f)) {
        const std::string& s = std::get<std::string>(f);
        return json ? "\"" + json_escape(s) + "\"" : csv_escape(s);
    }
    if (std::holds_alternative<double>(f)) return format_double(std::get<double>(f));
    if (std::holds_alternative<long long>(f)) return std::to_string(std::get<long long>(f));
    return std::get<bool>(f) ? "true" : "false";
}

}  // namespace

void write_json_lines(std::ostream& os, const std::vector<ReportRecord>& records) {
    for (const ReportRecord& rec : records) {
        os << '{';
        bool first = true;
        for (const auto& [key, value] : rec.fields()) {
            if (!first) os << ',';
            first = false;
            os << '"' << json_escape(key) << "\":" << field_to_string(value, true);
        }
        os << "}\n";
    }
}

void write_csv(std::ostream& os, const std::vector<ReportRecord>& records) {
    if (records.empty()) return;
    bool first = true;
    for (const auto& [key, value] : records.front().fields()) {
        (void)value;
        if (!first) os << ',';
        first = false;
        os << csv_escape(key);
    }
    os << '\n';
    for (const ReportRecord& rec : records) {
        if (rec.fields().size() != records.front().fields().size())
            throw validation_error("write_csv: records do not share a schema");
        first = true;
        for (const auto& [key, value] : rec.fields()) {
            (void)key;
            if (!first) os << ',';
            first = false;
            os << field_to_string(value, false);
        }
        os << '\n';
    }
}

}  // namespace cbplab
