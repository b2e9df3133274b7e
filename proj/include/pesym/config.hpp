#ifndef PESYM_CONFIG_HPP
#define PESYM_CONFIG_HPP

#include <json.hpp>

#include "pesym/fields.hpp"
#include "pesym/reduction.hpp"
#include "pesym/transforms.hpp"

namespace pesym::config {

using nlohmann::json;

/// Throws std::invalid_argument when the object holds a key outside `allowed`.
void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where);

json load_json_file(const std::string& path);

/// Scalar function registry:
///   {"type":"constant","value":v}
///   {"type":"poly","coeffs":[c0,c1,...]}
///   {"type":"sin","amp":a,"omega":w,"phase":ph}
///   {"type":"cos","amp":a,"omega":w,"phase":ph}
ScalarFn parse_scalar_fn(const json& obj);

PhysConsts parse_consts(const json& obj, double f);

Box parse_box(const json& obj);

struct FieldConfig {
    FieldPtr field;
    std::string name;
};

/// Field registry: named built-ins "stratified", "inertial",
/// "manufactured-polynomial" and "reduced" (an invariant-family spec block).
FieldConfig parse_field(const json& obj, const PhysConsts& consts);

/// Heating registry: {"type":"zero"} or {"type":"monomials","terms":[...]}.
HeatingField parse_heating(const json& obj);

SymmetryParams parse_symmetry_params(const json& obj);

ReductionSpec parse_reduction_spec(const json& obj, const PhysConsts& consts);

}  // namespace pesym::config

#endif
