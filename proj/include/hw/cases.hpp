#pragma once

#include <string>
#include <vector>

#include "hw/derivation.hpp"

namespace hw {

struct CaseScript {
    std::string name;
    std::string text;
};

// Built-in scripts, sorted by name.
const std::vector<CaseScript>& builtin_cases();
const CaseScript* find_case(const std::string& name);

RunResult run_case(const CaseScript& c, const RunOptions& opts = {});

// Runs the named cases (all when empty) in parallel; results follow the
// order of `names`, or name order when running all. Unknown names throw.
std::vector<RunResult> run_cases(const std::vector<std::string>& names, const RunOptions& opts = {});

} // namespace hw
