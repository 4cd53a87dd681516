#pragma once

// JSON forms of specs, rules, multipliers and run configuration.
//
// Complex numbers are [re, im]; a bare number is read as real. Sequence
// specs look like
//   {"kind": "family", "name": "one_plus_en", "params": {}, "meta": {...}}
//   {"kind": "explicit", "vectors": [[[1,0],[0,0]], ...], "meta": {...}}
// Malformed input raises SpecError.

#include <filesystem>

#include <json.hpp>

#include "frameforge/config.hpp"
#include "frameforge/multiplier.hpp"
#include "frameforge/seqcore.hpp"

namespace frameforge {

using Json = nlohmann::json;

Json to_json(Scalar z);
Scalar scalar_from_json(const Json& j);

Json to_json(const ScalarRule& rule);
ScalarRule rule_from_json(const Json& j);

Json to_json(const LimitMeta& meta);
LimitMeta meta_from_json(const Json& j);

Json to_json(const SequenceSpec& spec);
SequenceSpec spec_from_json(const Json& j);

/// Members as an explicit spec body: [[[re,im], ...], ...].
Json vectors_to_json(const Matrix& columns);
Matrix vectors_from_json(const Json& j);

Json to_json(const MultiplierSpec& spec);
MultiplierSpec multiplier_from_json(const Json& j);

Json to_json(const RunConfig& config);
/// Fields present in `j` override `base`; unknown keys are rejected.
RunConfig config_from_json(const Json& j, RunConfig base = {});

/// Reads and parses a JSON file; unreadable or malformed files raise SpecError.
Json load_json_file(const std::filesystem::path& path);

}  // namespace frameforge
