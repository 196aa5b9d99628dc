#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <thetagrade/kwinv.hpp>

namespace tg::app {

using nlohmann::json;

struct Check {
    int criterion = 0;  // acceptance criterion, 0 for auxiliary checks
    std::string name;
    bool pass = false;
    std::string witness;  // filled on failure
};

struct StageResult {
    json report = json::object();
    std::vector<Check> checks;
};

enum class Stage { Grade, Cartan, Weyl, KW };

struct ScenarioResult {
    std::string name;
    json report = json::object();
    std::vector<Check> checks;
    std::string error;    // math error that stopped the run
    bool invalid = false; // rejected scenario
    bool ok() const;
};

StageResult grade_stage(const Session& s);
StageResult cartan_stage(const Session& s, const CartanSubspace& c);
StageResult weyl_stage(const Session& s, const LittleWeylReport& lw);
StageResult kw_stage(const Session& s, const CartanSubspace& c, const LittleWeylReport& lw);

// runs the listed stages and every stage they depend on
ScenarioResult run_scenario(const Scenario& sc, const std::vector<Stage>& stages);
ScenarioResult run_all_stages(const Scenario& sc);

// scenarios in parallel, results in input order
std::vector<ScenarioResult> run_suite(const std::vector<Scenario>& suite, const std::vector<Stage>& stages,
                                      int threads);
// THETA_GRADE_THREADS, else hardware concurrency
int thread_cap();

json aggregate(const std::vector<ScenarioResult>& results);

json matrix_json(const Mat& a);

}  // namespace tg::app
