#include "orbicat/report.hpp"

namespace orbicat {

void ConditionReport::add(const std::string& name, double residual, double threshold) {
    double thr = threshold >= 0 ? threshold : tol.abs_eps;
    items.push_back({name, residual, std::isfinite(residual) && residual <= thr});
}

void ConditionReport::add_flag(const std::string& name, bool ok, double residual) {
    items.push_back({name, residual, ok});
}

bool ConditionReport::pass() const {
    for (const auto& c : items)
        if (!c.pass) return false;
    return true;
}

const Condition* ConditionReport::find(const std::string& name) const {
    for (const auto& c : items)
        if (c.name == name) return &c;
    return nullptr;
}

double ConditionReport::residual(const std::string& name) const {
    auto* c = find(name);
    return c ? c->residual : -1.0;
}

void ConditionReport::merge(const ConditionReport& other, const std::string& prefix) {
    for (const auto& c : other.items) items.push_back({prefix + c.name, c.residual, c.pass});
}

nlohmann::json ConditionReport::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& c : items) j[c.name] = {{"pass", c.pass}, {"residual", c.residual}};
    return j;
}

}  // namespace orbicat
