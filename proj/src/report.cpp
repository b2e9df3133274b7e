#include "pesym/report.hpp"

#include <iomanip>
#include <sstream>

namespace pesym {

Verdict Verdict::below(const std::string& name, double value, double tol) {
    return {name, value, tol, "<", value < tol};
}

Verdict Verdict::above(const std::string& name, double value, double tol) {
    return {name, value, tol, ">", value > tol};
}

bool Report::all_pass() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["settings"] = settings;
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [k, v] : metrics) m[k] = v;
    j["metrics"] = m;
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : verdicts) {
        vs.push_back({{"name", v.name},
                      {"value", v.value},
                      {"tol", v.tol},
                      {"relation", v.relation},
                      {"pass", v.pass}});
    }
    j["verdicts"] = vs;
    j["wall_ms"] = wall_ms;
    return j;
}

std::string Report::to_table() const {
    std::ostringstream os;
    os << "== " << command << " ==\n";
    os << std::scientific << std::setprecision(6);
    for (const auto& [k, v] : metrics)
        os << "  " << std::left << std::setw(36) << k << " " << v << "\n";
    for (const auto& v : verdicts) {
        os << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << std::left << std::setw(32) << v.name
           << " value=" << v.value << " " << v.relation << " tol=" << v.tol << "\n";
    }
    return os.str();
}

}  // namespace pesym
