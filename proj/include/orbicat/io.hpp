#pragma once
#include <string>

#include "json.hpp"
#include "orbicat/centre.hpp"
#include "orbicat/fusion.hpp"
#include "orbicat/locmod.hpp"
#include "orbicat/orbifold.hpp"
#include "orbicat/report.hpp"

namespace orbicat {

using ojson = nlohmann::ordered_json;

// [re, im] with tiny parts snapped to zero
ojson to_json(cplx z);
ojson to_json(const Mat& m);
cplx cplx_from_json(const nlohmann::json& j, const std::string& where);
Mat mat_from_json(const nlohmann::json& j, const std::string& where);
ojson to_json(const ConditionReport& r);
// indented output with arrays of scalars kept on one line
std::string pretty(const ojson& j);

// parses a file; ParseError messages carry path:line:column
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

SkeletalCategory category_from_json(const nlohmann::json& j);
ojson category_to_json(const SkeletalCategory& cat);
// a file path, or "builtin:<name>"
SkeletalCategory load_category(const std::string& arg);

OrbifoldDatum datum_from_json(const nlohmann::json& j);
ojson datum_to_json(const OrbifoldDatum& d);

AlgebraInMFC algebra_from_json(const nlohmann::json& j, const SkeletalCategory& cat);
ojson algebra_to_json(const AlgebraInMFC& a);

ojson modular_data_to_json(const ModularData& md);
// accepts both modular-data files and "ca modular" reports
ModularData modular_data_from_json(const nlohmann::json& j);

}  // namespace orbicat
