#ifndef HANDSYN_IO_HPP
#define HANDSYN_IO_HPP

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "handsyn/enumeration.hpp"
#include "handsyn/fk.hpp"
#include "handsyn/solvability.hpp"
#include "handsyn/synthesis.hpp"

namespace handsyn {

// Every output file carries a manifest for reproducibility. The timestamp
// honors SOURCE_DATE_EPOCH so identical inputs yield identical bytes.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& inputs,
                             std::uint64_t seed);

nlohmann::json topology_to_json(const TreeTopology& t);
TreeTopology topology_from_json(const nlohmann::json& j);

nlohmann::json atlas_to_json(const Atlas& atlas);
std::string atlas_table(const Atlas& atlas);

nlohmann::json report_to_json(const TreeTopology& t, const SolvabilityReport& report);

nlohmann::json task_to_json(const Task& task);
Task task_from_json(const nlohmann::json& j);

nlohmann::json configuration_to_json(const HandConfiguration& cfg);
nlohmann::json result_to_json(const SynthesisResult& result, const TreeTopology& t);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace handsyn

#endif
