#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

namespace lcdk::verify {

using nlohmann::json;

// Outcome of an inequality sweep. worst_slack is the minimum of LHS-RHS style
// slacks over all instances; >= 0 (up to tolerance) means every instance held.
struct VerificationReport {
    std::string name;
    std::int64_t instances_checked = 0;
    std::int64_t passes = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    json witness;
    json config;
    json details;

    void record(double slack, double tolerance) {
        ++instances_checked;
        if (slack >= -tolerance) ++passes;
        if (slack < worst_slack) worst_slack = slack;
    }

    void record(double slack, double tolerance, const json& instance) {
        if (slack < worst_slack) witness = instance;
        record(slack, tolerance);
    }

    void absorb(const VerificationReport& other) {
        instances_checked += other.instances_checked;
        passes += other.passes;
        if (other.worst_slack < worst_slack) {
            worst_slack = other.worst_slack;
            witness = other.witness;
        }
    }

    bool all_passed() const { return passes == instances_checked; }

    json to_json() const {
        json j;
        j["name"] = name;
        j["instances_checked"] = instances_checked;
        j["passes"] = passes;
        if (instances_checked == 0)
            j["worst_slack"] = nullptr;
        else
            j["worst_slack"] = std::clamp(worst_slack, -1e300, 1e300);
        j["witness"] = witness;
        j["config"] = config;
        if (!details.is_null()) j["details"] = details;
        return j;
    }
};

}  // namespace lcdk::verify
