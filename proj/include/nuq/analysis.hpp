#pragma once

#include "nuq/imq.hpp"
#include "nuq/linkdiag.hpp"
#include "nuq/numodule.hpp"
#include "nuq/qa.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nuq {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

enum class ImqStatus { Finite, Infinite, Skipped, Capped };
const char* imq_status_name(ImqStatus s);

struct AnalysisOptions {
    bool imq = true;
    ImqCaps caps;
    // quandles larger than this skip the quartic checks (axioms, group reconstruction)
    int heavy_check_limit = 160;
};

struct Analysis {
    LinkDiagram diagram;
    NuModule module;
    Int det;
    KerW kerw;
    bool evenized = false;  // make_even had to add kinks
    LinkDiagram even;
    Longitudes lon;
    std::vector<std::optional<Int>> lambda_orders;  // order in M; nullopt = infinite
    std::optional<std::vector<int>> zero_subset;
    std::optional<QaQuandle> qa;
    CharCompat charcompat;
    ParityProfile profile;
    std::optional<Reindexing> reindexing;
    ImqStatus imq_status = ImqStatus::Skipped;
    std::optional<ImqResult> imq;
    std::string imq_note;
    std::vector<Check> checks;

    bool all_checks_pass() const;
};

// Runs every computation and per-diagram invariant check. Checks that do not apply are omitted.
Analysis analyze(const LinkDiagram& d, const AnalysisOptions& opt = {});

}  // namespace nuq
