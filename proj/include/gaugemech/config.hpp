#pragma once

// Line-oriented configuration documents: `section.key = value`, `#` starts a
// comment, every key optional with a documented default.  One parser, one
// canonical serializer, and a stable hash of the canonical bytes so a run can
// be traced back to its exact inputs.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gaugemech/experiments.hpp"

namespace gm {

enum class ExperimentKind {
    double_slit,
    sweep,
    aharonov_bohm,
    epr,
    barrier,
    oracle_compare,
};

const char* to_string(ExperimentKind kind) noexcept;
const char* to_string(Estimator est) noexcept;
std::optional<ExperimentKind> experiment_kind_from(std::string_view name) noexcept;

// A parsed document: optional experiment selector (the command line may
// supply it instead) plus the full run configuration, defaults filled in.
struct ConfigDocument {
    std::optional<ExperimentKind> experiment;
    ExperimentConfig config{};
    long long epr_cases = 100;  // randomized pair-condition trials, >= 1

    friend bool operator==(const ConfigDocument&, const ConfigDocument&) = default;
};

// Unknown keys, duplicate keys, malformed values and range violations all
// raise config_error carrying a 1-based line number.  The empty document is
// valid and yields pure defaults.
ConfigDocument parse_config(const std::string& text);

// Canonical form: every key, fixed order, doubles at 17 significant digits.
// parse_config(serialize_config(doc)) == doc for any parsed document.
std::string serialize_config(const ConfigDocument& doc);

// FNV-1a 64 over the canonical serialization.
std::uint64_t config_hash(const ConfigDocument& doc);

}  // namespace gm
