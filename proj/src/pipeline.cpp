#include <ttrules/pipeline.hpp>

#include <ttrules/artifact.hpp>
#include <ttrules/error.hpp>
#include <ttrules/metrics.hpp>
#include <ttrules/util.hpp>

#include <chrono>
#include <set>

namespace ttrules
{

void validate( pipeline_config const& config )
{
  if ( config.data.empty() )
    throw config_error( "config needs a data path" );
  if ( config.schema.empty() )
    throw config_error( "config needs a schema path" );
  if ( config.arch.n_filters < 1 )
    throw config_error( "architecture.n_filters must be at least 1" );
  if ( config.arch.fan_in < 1 || config.arch.fan_in > max_fan_in )
    throw config_error( "architecture.fan_in must be in [1, " + std::to_string( max_fan_in ) + "]" );
  if ( config.arch.hidden_width < 1 )
    throw config_error( "architecture.hidden_width must be at least 1" );
  if ( !( config.corr_threshold > 0.0 ) || config.corr_threshold > 1.0 )
    throw config_error( "corr_threshold must be in (0, 1]" );
  if ( config.folds < 2 || config.val_folds < 2 )
    throw config_error( "folds and val_folds must be at least 2" );
  if ( config.jobs < 1 )
    throw config_error( "jobs must be at least 1" );
}

pipeline_config config_from_json( nlohmann::json const& j, std::filesystem::path const& base_dir )
{
  static std::set<std::string> const keys{ "data", "schema", "task", "architecture", "training", "head", "dont_care",
                                           "corr_threshold", "seed", "folds", "val_folds", "jobs", "out" };
  if ( !j.is_object() )
    throw config_error( "config must be a JSON object" );
  for ( auto const& [key, _] : j.items() )
    if ( !keys.contains( key ) )
      throw config_error( "unknown config key '" + key + "'" );

  auto resolve = [&]( std::string const& p ) {
    std::filesystem::path path( p );
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  pipeline_config c;
  try
  {
    c.data = resolve( j.at( "data" ).get<std::string>() );
    c.schema = resolve( j.at( "schema" ).get<std::string>() );
    if ( j.contains( "task" ) )
      c.task = parse_task_kind( j.at( "task" ).get<std::string>() );
    if ( j.contains( "architecture" ) )
    {
      auto const& ja = j.at( "architecture" );
      for ( auto const& [key, _] : ja.items() )
        if ( key != "n_filters" && key != "fan_in" && key != "hidden_width" )
          throw config_error( "unknown architecture key '" + key + "'" );
      c.arch.n_filters = ja.value( "n_filters", c.arch.n_filters );
      c.arch.fan_in = ja.value( "fan_in", c.arch.fan_in );
      c.arch.hidden_width = ja.value( "hidden_width", c.arch.hidden_width );
    }
    if ( j.contains( "training" ) )
    {
      if ( j.at( "training" ).contains( "seed" ) )
        throw config_error( "training.seed is not allowed; use the top-level seed" );
      c.training = training_params_from_json( j.at( "training" ) );
    }
    c.head = parse_head_mode( j.value( "head", std::string{ "float" } ) );
    if ( j.contains( "dont_care" ) )
    {
      auto const& jd = j.at( "dont_care" );
      for ( auto const& [key, _] : jd.items() )
        if ( key != "encoding" && key != "unseen" )
          throw config_error( "unknown dont_care key '" + key + "'" );
      c.dont_cares.encoding = jd.value( "encoding", true );
      c.dont_cares.unseen = jd.value( "unseen", false );
    }
    c.corr_threshold = j.value( "corr_threshold", 1.0 );
    c.seed = j.value( "seed", std::uint64_t{ 0 } );
    c.folds = j.value( "folds", std::size_t{ 5 } );
    c.val_folds = j.value( "val_folds", std::size_t{ 5 } );
    c.jobs = j.value( "jobs", std::size_t{ 1 } );
    if ( j.contains( "out" ) )
      c.out = resolve( j.at( "out" ).get<std::string>() );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw config_error( std::string{ "malformed config: " } + e.what() );
  }
  c.training.seed = c.seed;
  validate( c );
  return c;
}

pipeline_config load_config( std::filesystem::path const& path )
{
  if ( !std::filesystem::exists( path ) )
    throw config_error( "config file " + path.string() + " does not exist" );
  return config_from_json( read_json( path ), path.parent_path() );
}

nlohmann::json to_json( pipeline_config const& config )
{
  nlohmann::json j;
  j["data"] = config.data.generic_string();
  j["schema"] = config.schema.generic_string();
  if ( config.task )
    j["task"] = to_string( *config.task );
  j["architecture"] = { { "n_filters", config.arch.n_filters },
                        { "fan_in", config.arch.fan_in },
                        { "hidden_width", config.arch.hidden_width } };
  auto training = to_json( config.training );
  training.erase( "seed" );
  j["training"] = training;
  j["head"] = to_string( config.head );
  j["dont_care"] = { { "encoding", config.dont_cares.encoding }, { "unseen", config.dont_cares.unseen } };
  j["corr_threshold"] = config.corr_threshold;
  j["seed"] = config.seed;
  j["folds"] = config.folds;
  j["val_folds"] = config.val_folds;
  return j;
}

std::string config_hash( pipeline_config const& config )
{
  return hex64( fnv1a64( to_json( config ).dump() ) );
}

std::string metric_name( task_type const& task )
{
  switch ( task.kind )
  {
  case task_kind::binary: return "auc";
  case task_kind::multiclass: return "accuracy";
  case task_kind::regression: return "rmse";
  }
  return "?";
}

double ruleset_metric( rule_set const& rs, binarized_dataset const& data )
{
  std::vector<double> values;
  values.reserve( data.size() );
  for ( auto r = 0u; r < data.size(); ++r )
  {
    auto const s = scores( rs, data.row( r ) );
    values.push_back( rs.task.kind == task_kind::binary ? s[0] : decide( rs.task, s, rs.standardization ) );
  }
  switch ( rs.task.kind )
  {
  case task_kind::binary: return auc( values, data.targets );
  case task_kind::multiclass: return accuracy( values, data.targets );
  case task_kind::regression: return rmse( values, data.targets );
  }
  return 0.0;
}

namespace
{

std::string describe_mismatch( rule_set const& rs, ttnet_model const& model, binarized_dataset const& data,
                               agreement_report const& report, std::string const& split )
{
  std::string what = "rule set disagrees with the network on " + split + " (agreement " + format_double( report.agreement ) +
                     ", max score difference " + format_double( report.max_score_difference ) + ")";
  if ( !report.first_mismatch )
    return what;
  auto const input = data.row( *report.first_mismatch );
  what += "; first mismatch at row " + std::to_string( *report.first_mismatch );
  for ( auto const& r : rs.rules )
    if ( r.source_filter < model.filters.size() && r.fires( input ) != filter_output( model.filters[r.source_filter], input ) )
      return what + ", offending rule " + r.name;
  return what;
}

} // namespace

trained_model train_model( pipeline_config const& config, raw_dataset const& raw_train )
{
  trained_model out;
  out.map = fit_binarizer( raw_train );
  for ( auto const& w : out.map.warnings() )
    warn( w );
  out.data = binarize( raw_train, out.map );

  auto const inner = kfold_split( out.data, config.val_folds, config.seed + 1 ).front();
  out.fit = subset( out.data, inner.train );
  out.validation = subset( out.data, inner.test );

  auto const initial = build_model( out.map.total_bits(), config.arch.n_filters, config.arch.fan_in, config.arch.hidden_width,
                                    raw_train.spec.task, config.seed );
  auto hp = config.training;
  hp.seed = config.seed;
  out.training = train( initial, out.fit, out.validation, hp );
  out.model = out.training.model;
  if ( config.head == head_mode::ternary )
  {
    out.ternarization = ternarize_head( out.model, out.validation );
    out.model = out.ternarization->model;
  }
  out.model.provenance["config_hash"] = config_hash( config );
  return out;
}

verified_rules extract_and_verify( pipeline_config const& config, ttnet_model const& model, binarizer_map const& map,
                                   binarized_dataset const& data )
{
  verified_rules out;
  auto const rules = extract_rules( model, map, data, { config.dont_cares, config.jobs } );
  out.extracted_rules = rules.size();
  out.optimized = optimize_ruleset( rules, data, config.corr_threshold );
  out.optimized.rules.provenance["config_hash"] = config_hash( config );
  out.agreement = verify_exactness( out.optimized.rules, model, data );
  if ( config.lossless() && ( out.agreement.agreement < 1.0 || out.agreement.max_score_difference > 1e-9 ) )
    throw exactness_error( describe_mismatch( out.optimized.rules, model, data, out.agreement, "training rows" ) );
  return out;
}

split_outcome run_split( pipeline_config const& config, raw_dataset const& raw, std::span<std::size_t const> train_rows,
                         std::span<std::size_t const> test_rows )
{
  auto const start = std::chrono::steady_clock::now();
  split_outcome out;

  auto trained = train_model( config, subset( raw, train_rows ) );
  auto const test = binarize( subset( raw, test_rows ), trained.map );
  auto verified = extract_and_verify( config, trained.model, trained.map, trained.data );

  out.map = std::move( trained.map );
  out.model = std::move( trained.model );
  out.training = std::move( trained.training );
  out.ternarization = std::move( trained.ternarization );
  out.extracted_rules = verified.extracted_rules;
  out.optimized = std::move( verified.optimized );
  out.train_agreement = verified.agreement;
  out.test_agreement = verify_exactness( out.optimized.rules, out.model, test );
  if ( config.lossless() && ( out.test_agreement.agreement < 1.0 || out.test_agreement.max_score_difference > 1e-9 ) )
    throw exactness_error( describe_mismatch( out.optimized.rules, out.model, test, out.test_agreement, "test rows" ) );

  out.val_metric = ruleset_metric( out.optimized.rules, trained.validation );
  if ( test.size() > 0 )
    out.test_metric = ruleset_metric( out.optimized.rules, test );
  out.seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
  return out;
}

} // namespace ttrules
