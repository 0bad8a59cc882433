#include <ttrules/evaluation.hpp>

#include <ttrules/error.hpp>
#include <ttrules/util.hpp>

#include <cmath>
#include <cstdio>
#include <numeric>

namespace ttrules
{

std::pair<double, double> mean_std( std::span<double const> values )
{
  if ( values.empty() )
    return { 0.0, 0.0 };
  auto const n = static_cast<double>( values.size() );
  auto const mean = std::accumulate( values.begin(), values.end(), 0.0 ) / n;
  double var = 0.0;
  for ( auto const v : values )
    var += ( v - mean ) * ( v - mean );
  return { mean, std::sqrt( var / n ) };
}

nlohmann::json cv_summary::to_json() const
{
  return { { "metric", metric },
           { "fold_metrics", fold_metrics },
           { "mean", mean },
           { "std", std },
           { "fold_rules", fold_rules },
           { "fold_seconds", fold_seconds },
           { "folds", fold_details } };
}

cv_summary cross_validate( pipeline_config const& config, raw_dataset const& raw, std::size_t k, std::uint64_t seed )
{
  if ( config.task && *config.task != raw.spec.task.kind )
    throw config_error( "task mismatch: config asks for " + to_string( *config.task ) + " but the dataset is " +
                        to_string( raw.spec.task.kind ) );
  auto const folds = kfold_split( raw.targets, raw.spec.task, k, seed );

  /* folds are independent; extraction inside each fold stays sequential */
  auto fold_config = config;
  fold_config.jobs = 1;
  std::vector<split_outcome> outcomes( k );
  parallel_for( k, config.jobs, [&]( std::size_t f ) {
    try
    {
      outcomes[f] = run_split( fold_config, raw, folds[f].train, folds[f].test );
    }
    catch ( exactness_error const& e )
    {
      throw exactness_error( "fold " + std::to_string( f ) + ": " + e.what() );
    }
  } );

  cv_summary summary;
  summary.metric = metric_name( raw.spec.task );
  for ( auto f = 0u; f < k; ++f )
  {
    auto const& o = outcomes[f];
    summary.fold_metrics.push_back( o.test_metric );
    summary.fold_rules.push_back( o.optimized.rules.size() );
    summary.fold_seconds.push_back( o.seconds );
    nlohmann::json detail{ { "fold", f },
                           { "train_rows", folds[f].train.size() },
                           { "test_rows", folds[f].test.size() },
                           { "input_bits", o.map.total_bits() },
                           { "best_epoch", o.training.best_epoch },
                           { "val_metric", o.val_metric },
                           { "test_metric", o.test_metric },
                           { "extracted_rules", o.extracted_rules },
                           { "optimization", o.optimized.report.to_json() },
                           { "train_agreement", o.train_agreement.to_json() },
                           { "test_agreement", o.test_agreement.to_json() } };
    if ( o.ternarization )
      detail["ternarize"] = { { "threshold", o.ternarization->threshold },
                              { "float_metric", o.ternarization->float_metric },
                              { "ternary_metric", o.ternarization->ternary_metric } };
    summary.fold_details.push_back( std::move( detail ) );
  }
  std::tie( summary.mean, summary.std ) = mean_std( summary.fold_metrics );
  return summary;
}

std::string format_table_row( std::string const& dataset, cv_summary const& summary )
{
  std::vector<double> rules( summary.fold_rules.begin(), summary.fold_rules.end() );
  auto const [rule_mean, rule_std] = mean_std( rules );
  char buffer[256];
  std::snprintf( buffer, sizeof( buffer ), "%-24s | %-8s | %.3f ± %.3f | %.1f ± %.1f rules", dataset.c_str(), summary.metric.c_str(),
                 summary.mean, summary.std, rule_mean, rule_std );
  return buffer;
}

} // namespace ttrules
