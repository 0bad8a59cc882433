#pragma once

#include <ttrules/logic.hpp>
#include <ttrules/tabular.hpp>
#include <ttrules/ttnet.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace ttrules
{

/* A rule contributes weights[c] to output c whenever its formula fires. */
struct rule
{
  std::string name;
  dnf_formula formula;
  std::vector<double> weights;
  std::size_t source_filter = 0;

  bool fires( std::span<std::uint8_t const> input ) const { return formula.evaluate( input ); }
};

struct rule_set
{
  std::vector<rule> rules;
  std::vector<double> bias;
  task_type task;
  head_mode mode = head_mode::floating;
  std::size_t input_bits = 0;
  binarizer_map map;
  target_standardization standardization;
  nlohmann::json provenance = nlohmann::json::object();

  std::size_t size() const { return rules.size(); }
};

/* contribution of the rule to the first output: weight if fired, else 0 */
double rule_eval( rule const& r, std::span<std::uint8_t const> input );

std::vector<double> scores( rule_set const& rs, std::span<std::uint8_t const> input );
double predict( rule_set const& rs, std::span<std::uint8_t const> input );

struct optimization_report
{
  std::size_t initial = 0;
  std::size_t after_constant_folding = 0;
  std::size_t after_exact_merge = 0;
  std::size_t after_complement_merge = 0;
  std::size_t after_correlation_pruning = 0;
  double corr_threshold = 1.0;
  std::size_t pruned_pairs = 0;
  /* train rows whose prediction is unchanged by correlation pruning */
  double train_agreement = 1.0;

  nlohmann::json to_json() const;
};

struct optimization_result
{
  rule_set rules;
  optimization_report report;
};

/*! \brief Shrinks a rule set in four passes.

  1. constant folding (formula constant over its whole domain),
  2. merge of rules computing the same function,
  3. merge of rules computing complementary functions,
  4. correlation pruning over train firing vectors, only for
     corr_threshold < 1.

  Functions are compared on their essential support, so passes 1-3 leave
  every score unchanged on every input. Pass 4 is lossy.
*/
optimization_result optimize_ruleset( rule_set const& rs, binarized_dataset const& train, double corr_threshold = 1.0 );

struct agreement_report
{
  std::size_t rows = 0;
  std::size_t agreeing = 0;
  double agreement = 1.0;
  double max_score_difference = 0.0;
  bool zero_rows = false;
  std::optional<std::size_t> first_mismatch;

  nlohmann::json to_json() const;
};

agreement_report verify_exactness( rule_set const& rs, ttnet_model const& model, binarized_dataset const& data );

/* (+1) IF NOT(Bland Chromatin ≥ 10) AND NOT(Mitoses ≥ 3) */
std::string to_text( rule const& r, rule_set const& rs );
std::string to_text( rule_set const& rs );

nlohmann::json to_json( rule_set const& rs );
rule_set ruleset_from_json( nlohmann::json const& j );

} // namespace ttrules
