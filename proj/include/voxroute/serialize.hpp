// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

// nlohmann::json bindings for the artifact schema. Enums are lower
// snake_case strings, timestamps RFC 3339, an unreachable latency is null.

#pragma once

#include "json.hpp"
#include "voxroute/command.hpp"
#include "voxroute/execution.hpp"
#include "voxroute/inference.hpp"
#include "voxroute/metrics.hpp"
#include "voxroute/pipeline.hpp"
#include "voxroute/router.hpp"

namespace voxroute {

using json = nlohmann::json;

void to_json(json& j, const SystemMetrics& m);
void from_json(const json& j, SystemMetrics& m);
void to_json(json& j, const PerturbationRecord& p);
void from_json(const json& j, PerturbationRecord& p);
void to_json(json& j, const RoutingDecision& d);
void from_json(const json& j, RoutingDecision& d);
void to_json(json& j, const InferenceResult& r);
void from_json(const json& j, InferenceResult& r);
void to_json(json& j, const DeviceCommand& c);
void from_json(const json& j, DeviceCommand& c);
void to_json(json& j, const ValidationReport& r);
void from_json(const json& j, ValidationReport& r);
void to_json(json& j, const RepairOutcome& r);
void from_json(const json& j, RepairOutcome& r);
void to_json(json& j, const DeviceState& s);
void from_json(const json& j, DeviceState& s);
void to_json(json& j, const ExecutionResult& r);
void from_json(const json& j, ExecutionResult& r);
void to_json(json& j, const ParseFailure& f);
void from_json(const json& j, ParseFailure& f);
void to_json(json& j, const SampleArtifact& a);
void from_json(const json& j, SampleArtifact& a);

}  // namespace voxroute
