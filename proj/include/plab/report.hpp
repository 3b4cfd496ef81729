#ifndef PLAB_REPORT_HPP
#define PLAB_REPORT_HPP

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "plab/version.hpp"

namespace plab {

/// Worst sample retained by a verification run.
struct Offender {
    long sample = -1;
    double residual = 0.0;
    std::string note;
};

/// Outcome of one named numerical check over a sample set.
struct VerificationReport {
    std::string check;
    long samples = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<Offender> worst;  // at most five, largest residual first

    /// Fold one sample into the running report.
    void record(long sample, double residual, const std::string& note = "") {
        samples = std::max(samples, sample + 1);
        max_residual = std::max(max_residual, residual);
        worst.push_back({sample, residual, note});
        std::sort(worst.begin(), worst.end(),
                  [](const Offender& a, const Offender& b) { return a.residual > b.residual; });
        if (worst.size() > 5) worst.resize(5);
    }

    void finalize() { pass = max_residual <= tolerance; }
};

inline void to_json(nlohmann::json& j, const Offender& o) {
    j = {{"sample", o.sample}, {"residual", o.residual}};
    if (!o.note.empty()) j["note"] = o.note;
}

inline void to_json(nlohmann::json& j, const VerificationReport& r) {
    j = {{"check", r.check},       {"samples", r.samples}, {"max_residual", r.max_residual},
         {"tolerance", r.tolerance}, {"pass", r.pass},       {"worst", r.worst}};
}

/// Top-level run report emitted by the CLI.
struct Report {
    std::string version = kVersion;
    nlohmann::json config = nlohmann::json::object();
    std::vector<VerificationReport> checks;
    bool overall_pass = true;
    double wall_time_seconds = 0.0;

    void add(VerificationReport r) {
        r.finalize();
        overall_pass = overall_pass && r.pass;
        checks.push_back(std::move(r));
    }

    nlohmann::json to_json_full() const {
        nlohmann::json j = to_json_canonical();
        j["wall_time_seconds"] = wall_time_seconds;
        return j;
    }

    /// Everything except wall time; identical seeded runs must agree byte
    /// for byte on this object.
    nlohmann::json to_json_canonical() const {
        return {{"version", version},
                {"config", config},
                {"checks", checks},
                {"overall_pass", overall_pass}};
    }

    std::string to_text() const {
        std::string out = "plab " + version + "\n";
        for (const auto& c : checks) {
            char line[256];
            std::snprintf(line, sizeof line, "%-38s %s  max %.3e  tol %.3e  (%ld samples)\n",
                          c.check.c_str(), c.pass ? "PASS" : "FAIL", c.max_residual, c.tolerance,
                          c.samples);
            out += line;
        }
        out += overall_pass ? "overall: PASS\n" : "overall: FAIL\n";
        return out;
    }
};

}

#endif
