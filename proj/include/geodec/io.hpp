#pragma once

#include "geodec/controller.hpp"
#include "geodec/plant.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace geodec {

inline constexpr const char* kToolVersion = "0.1.0";

// Parse error with a human-readable location ("matrix 'b', row 2: ...").
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PlantFile {
    Plant plant;
    std::optional<Tolerances> tolerances;
    std::optional<SpectrumMultiset> target_poles;
};

PlantFile parse_plant(const nlohmann::json& j);
PlantFile parse_plant_file(const std::string& path);
nlohmann::json plant_to_json(const Plant& plant, const std::optional<Tolerances>& tol = {},
                             const std::optional<SpectrumMultiset>& target_poles = {});

nlohmann::json controller_to_json(const Controller& c);
Controller parse_controller(const nlohmann::json& j);
Controller parse_controller_file(const std::string& path);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& name);
nlohmann::json spectrum_to_json(const SpectrumMultiset& s);

// Deterministic serialisation: keys sorted (nlohmann object order), doubles
// printed with 17 significant digits, 2-space indent, trailing newline.
std::string dump_canonical(const nlohmann::json& j);

}  // namespace geodec
