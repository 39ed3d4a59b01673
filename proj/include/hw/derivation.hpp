#pragma once

// Script-driven derivations. A script is TOML:
//
//   level = 13
//   hecke = [2, 3]
//   invariants = ["W"]          # assumed invariants beyond T
//
//   [[step]]
//   kind = "build_D"
//   n = 3
//   name = "D3"
//
// Each step names its output; outputs established as ≡ 0 ("facts") carry a
// certificate in terms of the hypotheses and earlier facts. `expect*` keys
// turn into checks; a run passes when every check holds.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hw/error.hpp"
#include "hw/hypotheses.hpp"
#include "hw/transforms.hpp"

namespace hw {

struct Value {
    Element element;
    RelationPtr fact;
    std::optional<PairedRelation> paired;
    // element == (1 - left_gamma) * right_factor
    std::optional<ProjMatrix> left_gamma;
    std::optional<Element> right_factor;
    std::optional<ProjMatrix> eps_matrix;
    std::optional<Coefficient> eps_sign;
};

struct Check {
    std::size_t step = 0;   // 1-based
    std::string what;
    bool ok = false;
    std::string detail;
};

struct RunOptions {
    std::optional<int> depth;     // overrides the script's search depth
};

struct RunResult {
    std::string name;
    std::string title;
    long level = 0;
    bool ok = false;
    std::string error;            // set when a step failed outright
    std::optional<ErrorKind> error_kind;
    DerivationLog log;
    std::vector<Check> checks;
    std::vector<std::string> flags;   // discrepancies worth reporting
    std::map<std::string, Value> values;
    std::optional<HypothesisSet> base_hyp;    // hypotheses before the first step
    std::optional<HypothesisSet> final_hyp;

    // Verifies step i's certificate against the base hypotheses.
    bool verify_step(std::size_t i, std::string* why = nullptr) const;
};

// `source_name` is used in parse error messages.
RunResult run_script(const std::string& text, const std::string& source_name, const RunOptions& opts = {});

// Runs `script` from `hyp`, then requires reduce(x) == 0 under the resulting
// hypotheses. Throws StepFailed naming the step when anything fails.
DerivationLog assert_equiv_zero(const Element& x, const HypothesisSet& hyp, const std::string& script);

std::string to_text(const RunResult& r);

} // namespace hw
