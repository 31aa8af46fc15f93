#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freeterm/algebra.hpp"
#include "freeterm/models.hpp"

#include "json.hpp"

namespace freeterm {

struct AnalyzeOptions {
    bool with_algebra = true;
    std::uint32_t commutativity_bound = 3;
};

struct AnalyzeResult {
    FtVerdict verdict;
    int category = 0;
    std::optional<AlgebraReport> algebra;
};

AnalyzeResult analyze_model(const Model& m, const AnalyzeOptions& opt = {});

// Report keys are sorted and state lists ascending, so reports are stable.
nlohmann::json analyze_to_json(const Model& m, const AnalyzeResult& r);
std::string analyze_to_text(const Model& m, const AnalyzeResult& r);

// Named property checks behind `freeterm check --prop`. Each one asserts a
// consequence of an algebraic precondition; inputs that miss the
// precondition get a not_applicable verdict rather than a failure.
std::vector<std::string> check_prop_names();
PropVerdict run_check_prop(const Model& m, const std::string& name);
std::string verdict_to_text(const PropVerdict& v, const Model& m);

} // namespace freeterm
