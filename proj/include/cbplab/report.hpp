#pragma once

// Machine-readable result records. Every top-level operation emits records
// that carry enough inputs (spec hash, flags, seed) to reproduce themselves;
// all floating-point fields are printed with 17 significant digits so
// identical runs produce identical bytes.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cbplab {

class ReportRecord {
public:
    using Field = std::variant<std::string, double, long long, bool>;

    ReportRecord& add(const std::string& key, const char* value) {
        fields_.emplace_back(key, std::string(value));
        return *this;
    }
    ReportRecord& add(const std::string& key, std::string value) {
        fields_.emplace_back(key, std::move(value));
        return *this;
    }
    ReportRecord& add(const std::string& key, double value) {
        fields_.emplace_back(key, value);
        return *this;
    }
    ReportRecord& add(const std::string& key, long long value) {
        fields_.emplace_back(key, value);
        return *this;
    }
    ReportRecord& add(const std::string& key, std::uint64_t value) {
        fields_.emplace_back(key, static_cast<long long>(value));
        return *this;
    }
    ReportRecord& add(const std::string& key, int value) {
        fields_.emplace_back(key, static_cast<long long>(value));
        return *this;
    }
    ReportRecord& add(const std::string& key, bool value) {
        fields_.emplace_back(key, value);
        return *this;
    }

    const std::vector<std::pair<std::string, Field>>& fields() const { return fields_; }

private:
    std::vector<std::pair<std::string, Field>> fields_;
};

std::string format_double(double v);  // %.17g

// one JSON object per line
void write_json_lines(std::ostream& os, const std::vector<ReportRecord>& records);

// header from the first record, one row per record (records must share the
// same schema)
void write_csv(std::ostream& os, const std::vector<ReportRecord>& records);

}  // namespace cbplab
