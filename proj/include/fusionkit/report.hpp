#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fusionkit/rational.hpp"

namespace fusionkit {

/// Structured computation report, schema "fusionkit-report/1". Field order
/// is fixed and all rational values serialize as p/q strings, so identical
/// inputs produce byte-identical documents.
class Report {
public:
    explicit Report(std::string command);

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, long value);
    void add(const std::string& key, const Scalar& value);
    void add(const std::string& key, bool value);

    /// Human-readable keyed text document.
    std::string text() const;

    /// Machine-readable JSON with the same field order.
    std::string json() const;

    const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace fusionkit
