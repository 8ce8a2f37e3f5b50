#pragma once
#include "json.hpp"
#include <map>
#include <string>
#include <vector>

#include "orbicat/numeric.hpp"

namespace orbicat {

struct Condition {
    std::string name;
    double residual = 0.0;
    bool pass = true;
};

struct ConditionReport {
    std::vector<Condition> items;
    Tolerance tol;
    // informational values that are not pass/fail conditions
    std::map<std::string, double> info;

    // records residual and compares against threshold (defaults to tol.abs_eps)
    void add(const std::string& name, double residual, double threshold = -1.0);
    void add_flag(const std::string& name, bool ok, double residual = 0.0);
    bool pass() const;
    double residual(const std::string& name) const;
    const Condition* find(const std::string& name) const;
    void merge(const ConditionReport& other, const std::string& prefix = "");
    nlohmann::json to_json() const;
};

}  // namespace orbicat
