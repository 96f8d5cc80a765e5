#include "fusionkit/report.hpp"

#include <json.hpp>

namespace fusionkit {

Report::Report(std::string command) {
    fields_.emplace_back("schema", "fusionkit-report/1");
    fields_.emplace_back("command", std::move(command));
}

void Report::add(const std::string& key, const std::string& value) {
    fields_.emplace_back(key, value);
}

void Report::add(const std::string& key, long value) {
    fields_.emplace_back(key, std::to_string(value));
}

void Report::add(const std::string& key, const Scalar& value) {
    fields_.emplace_back(key, value.str());
}

void Report::add(const std::string& key, bool value) {
    fields_.emplace_back(key, value ? "true" : "false");
}

std::string Report::text() const {
    std::string out;
    for (const auto& [k, v] : fields_) {
        out += k;
        out += ": ";
        out += v;
        out += "\n";
    }
    return out;
}

std::string Report::json() const {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : fields_) j[k] = v;
    return j.dump(2) + "\n";
}

}  // namespace fusionkit
