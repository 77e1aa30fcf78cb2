// Copyright 2026 The sbcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON views of statistics and certificates.

#pragma once

#include "json.hpp"
#include "sbcert/certify.hpp"

namespace sbcert {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const ProbabilityEstimate& e);
nlohmann::json to_json(const NotStatistics& s);
nlohmann::json to_json(const SwapStatistics& s);
nlohmann::json to_json(const DerivedRatios& d);
nlohmann::json to_json(const StatisticalCorrection& c);
nlohmann::json to_json(const SuperpositionCertificate& c);
nlohmann::json to_json(const EntanglementCertificate& c);

}  // namespace sbcert
