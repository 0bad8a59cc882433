#pragma once

#include <ttrules/extraction.hpp>
#include <ttrules/ruleset.hpp>
#include <ttrules/tabular.hpp>
#include <ttrules/ttnet.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

namespace ttrules
{

struct architecture
{
  std::size_t n_filters = 32;
  std::size_t fan_in = 6;
  std::size_t hidden_width = 4;
};

/*! \brief Everything needed to reproduce a run.

  JSON keys: data, schema, task, architecture{n_filters, fan_in,
  hidden_width}, training{...}, head ("float" | "ternary"),
  dont_care{encoding, unseen}, corr_threshold, seed, folds, val_folds,
  jobs, out. Unknown keys are rejected. Relative paths are resolved
  against the directory of the config file.
*/
struct pipeline_config
{
  std::filesystem::path data;
  std::filesystem::path schema;
  std::optional<task_kind> task;
  architecture arch;
  training_params training;
  head_mode head = head_mode::floating;
  dont_care_options dont_cares;
  double corr_threshold = 1.0;
  std::uint64_t seed = 0;
  std::size_t folds = 5;
  std::size_t val_folds = 5; /* validation = 1/val_folds of the training rows */
  std::size_t jobs = 1;
  std::filesystem::path out = "out";

  /* lossless: extraction and optimization must reproduce the network exactly */
  bool lossless() const { return !dont_cares.unseen && corr_threshold >= 1.0; }
};

void validate( pipeline_config const& config );
pipeline_config config_from_json( nlohmann::json const& j, std::filesystem::path const& base_dir = {} );
pipeline_config load_config( std::filesystem::path const& path );
/* canonical JSON; jobs and out are excluded since they do not affect results */
nlohmann::json to_json( pipeline_config const& config );
std::string config_hash( pipeline_config const& config );

/* Network trained on one set of raw rows. The inner validation split is
   fold 0 of a val_folds-fold split of those rows (seed + 1). */
struct trained_model
{
  binarizer_map map;
  binarized_dataset data; /* every training row, binarized */
  binarized_dataset fit;
  binarized_dataset validation;
  training_result training;
  std::optional<ternarize_result> ternarization;
  ttnet_model model;
};

trained_model train_model( pipeline_config const& config, raw_dataset const& raw_train );

struct verified_rules
{
  std::size_t extracted_rules = 0;
  optimization_result optimized;
  agreement_report agreement;
};

/* Extracts and optimizes the rules of `model` and verifies them on data.
   Throws exactness_error naming the offending rule when a lossless run
   disagrees. */
verified_rules extract_and_verify( pipeline_config const& config, ttnet_model const& model, binarizer_map const& map,
                                   binarized_dataset const& data );

struct split_outcome
{
  binarizer_map map;
  ttnet_model model;
  training_result training;
  std::optional<ternarize_result> ternarization;
  std::size_t extracted_rules = 0;
  optimization_result optimized;
  agreement_report train_agreement;
  agreement_report test_agreement;
  double val_metric = 0.0;
  double test_metric = 0.0;
  double seconds = 0.0;
};

/* Fits the binarizer on the training rows, trains (and ternarizes),
   extracts, optimizes and verifies, then scores the rule set on the test
   rows. Throws exactness_error when a lossless run disagrees. */
split_outcome run_split( pipeline_config const& config, raw_dataset const& raw, std::span<std::size_t const> train_rows,
                         std::span<std::size_t const> test_rows );

/* The rule-set metric on data: AUC of the score (binary), accuracy
   (multiclass) or RMSE (regression). */
double ruleset_metric( rule_set const& rs, binarized_dataset const& data );
std::string metric_name( task_type const& task );

} // namespace ttrules
