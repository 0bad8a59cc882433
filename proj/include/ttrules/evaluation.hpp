#pragma once

#include <ttrules/pipeline.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ttrules
{

struct cv_summary
{
  std::string metric;
  std::vector<double> fold_metrics;
  double mean = 0.0;
  double std = 0.0; /* population */
  std::vector<std::size_t> fold_rules;
  std::vector<double> fold_seconds;
  std::vector<nlohmann::json> fold_details;

  nlohmann::json to_json() const;
};

/* mean and population standard deviation */
std::pair<double, double> mean_std( std::span<double const> values );

cv_summary cross_validate( pipeline_config const& config, raw_dataset const& raw, std::size_t k, std::uint64_t seed );

/* "name | metric | mean ± std | rules" */
std::string format_table_row( std::string const& dataset, cv_summary const& summary );

} // namespace ttrules
