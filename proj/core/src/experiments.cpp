#include "svlab/experiments.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "svlab/error.hpp"
#include "svlab/propositional.hpp"
#include "svlab/report_io.hpp"
#include "svlab/verifiers.hpp"

namespace svlab {

namespace {

using nlohmann::json;

std::string claim_line(const ClaimResult& r) {
  std::ostringstream line;
  line << "claim " << r.claim.kind << ": " << (r.pass ? "PASS" : "FAIL") << " ("
       << r.detail << ")";
  return line.str();
}

ExperimentOutcome statistical_experiment(const ExperimentConfig& config) {
  VerifierFamily family = [&] {
    if (config.experiment == "verify") return verifier_for(*config.hypothesis, config.alpha);
    if (config.experiment == "limit") return limiting_verifier(*config.hypothesis, config.alpha);
    return solver(*config.partition, config.alpha);
  }();

  TrialPlan plan{.family = family,
                 .world = *config.world,
                 .n_max = config.n_max,
                 .trials = config.trials,
                 .master_seed = config.seed,
                 .threads = config.threads,
                 .target_payload = config.target_payload};
  if (config.experiment == "solve" && !plan.target_payload) {
    // The designated payload defaults to the world's true answer.
    std::optional<int> truth = config.partition->classify(plan.world);
    if (!truth)
      fail("cannot classify world " + plan.world.label() +
           " within the answer search depth; set \"target_payload\" explicitly");
    plan.target_payload = static_cast<std::int32_t>(*truth);
  }

  TrialReport report = run_trials(plan);
  std::vector<ClaimResult> results = certify(plan, report, config.claims);

  ExperimentOutcome outcome;
  for (const auto& r : results)
    if (!r.pass) outcome.exit_code = 2;

  std::ostringstream summary;
  summary << "experiment: " << config.experiment << "\n";
  summary << "world: " << plan.world.label() << "\n";
  summary << "family: " << family.tag() << " at alpha=" << rational_str(config.alpha) << "\n";
  summary << "n_max=" << config.n_max << " trials=" << config.trials
          << " seed=" << config.seed << "\n";
  if (plan.target_payload)
    summary << "target payload: " << family.payload_label(*plan.target_payload) << "\n";
  summary << "final accept rate: " << format_rate(report.accept_rate(report.n_max)) << "\n";
  summary << "cumulative accept sum: " << format_rate(report.cum_error()) << "\n";
  summary << "eventual (tail) rate: " << format_rate(report.eventual_rate()) << "\n";
  for (const auto& r : results) summary << claim_line(r) << "\n";
  outcome.summary = summary.str();

  std::string fmt = config.output ? config.output->format : "csv";
  outcome.format = fmt;
  if (fmt == "csv") {
    std::ostringstream table;
    write_report_csv(table, report);
    outcome.table = table.str();
  } else {
    json doc;
    doc["experiment"] = config.experiment;
    doc["world"] = plan.world.label();
    doc["alpha"] = rational_str(config.alpha);
    doc["report"] = report_to_json(report);
    doc["claims"] = claim_results_to_json(results);
    outcome.table = doc.dump(2) + "\n";
  }
  return outcome;
}

ExperimentOutcome prop_experiment(const ExperimentConfig& config) {
  PropMethod method = prop_method_by_name(config.method);
  BinaryWorld world = parse_binary_world(config.pattern);
  std::vector<PropConclusion> stages = simulate_inquiry(method, world, config.stages);

  ExperimentOutcome outcome;
  std::ostringstream summary;
  summary << "experiment: prop\n";
  summary << "method: " << method.name << "\n";
  summary << "world: " << world.label << "\n";
  summary << "stages: " << config.stages << "\n";
  summary << "final conclusion: " << stages.back().label << "\n";
  outcome.summary = summary.str();

  std::string fmt = config.output ? config.output->format : "csv";
  outcome.format = fmt;
  if (fmt == "csv") {
    std::ostringstream table;
    write_inquiry_csv(table, stages);
    outcome.table = table.str();
  } else {
    json doc;
    doc["experiment"] = "prop";
    doc["method"] = method.name;
    doc["world"] = world.label;
    doc["stages"] = inquiry_to_json(stages);
    outcome.table = doc.dump(2) + "\n";
  }
  return outcome;
}

ExperimentOutcome weak_convergence_experiment(const ExperimentConfig& config) {
  WeakConvergenceReport report = weak_convergence_check(config.sequence, *config.limit_world,
                                                        config.events, config.tolerance);

  ExperimentOutcome outcome;
  outcome.exit_code = report.converged ? 0 : 2;

  std::ostringstream summary;
  summary << "experiment: weak-convergence\n";
  summary << "sequence length: " << config.sequence.size() << "\n";
  summary << "limit: " << config.limit_world->label() << "\n";
  summary << "tolerance: " << rational_str(config.tolerance) << "\n";
  summary << "converged: " << (report.converged ? "yes" : "no") << "\n";
  outcome.summary = summary.str();

  std::string fmt = config.output ? config.output->format : "csv";
  outcome.format = fmt;
  if (fmt == "csv") {
    std::ostringstream table;
    write_weak_convergence_csv(table, report);
    outcome.table = table.str();
  } else {
    json doc = weak_convergence_to_json(report);
    doc["experiment"] = "weak-convergence";
    outcome.table = doc.dump(2) + "\n";
  }
  return outcome;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  if (config.experiment == "verify" || config.experiment == "limit" ||
      config.experiment == "solve")
    return statistical_experiment(config);
  if (config.experiment == "prop") return prop_experiment(config);
  if (config.experiment == "weak-convergence") return weak_convergence_experiment(config);
  fail("unknown experiment kind: \"" + config.experiment + "\"");
}

}  // namespace svlab
