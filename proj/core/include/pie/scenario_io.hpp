// Copyright 2026 The PIE Explorer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIE_SCENARIO_IO_HPP_
#define PIE_SCENARIO_IO_HPP_

#include <filesystem>
#include <string>

#include "pie/scenario.hpp"

namespace pie
{

/// Parses and validates a JSON scenario. Throws ScenarioError naming the offending field.
Scenario parse_scenario(const std::string & text);
Scenario load_scenario(const std::filesystem::path & path);

std::string dump_scenario(const Scenario & scenario);
void save_scenario(const Scenario & scenario, const std::filesystem::path & path);

}  // namespace pie

#endif  // PIE_SCENARIO_IO_HPP_
