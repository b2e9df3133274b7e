#ifndef PESYM_REPORT_HPP
#define PESYM_REPORT_HPP

#include <json.hpp>

#include <string>
#include <vector>

namespace pesym {

/// One checked criterion: pass iff the metric relates to the tolerance as
/// declared ("<" or ">" for negative controls).
struct Verdict {
    std::string name;
    double value = 0.0;
    double tol = 0.0;
    std::string relation = "<";
    bool pass = false;
    static Verdict below(const std::string& name, double value, double tol);
    static Verdict above(const std::string& name, double value, double tol);
};

struct Report {
    std::string command;
    nlohmann::json settings;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<Verdict> verdicts;
    double wall_ms = 0.0;

    void metric(const std::string& name, double value) { metrics.emplace_back(name, value); }
    bool all_pass() const;
    nlohmann::json to_json() const;
    std::string to_table() const;
};

}  // namespace pesym

#endif
