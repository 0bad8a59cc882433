#include <ttrules/artifact.hpp>
#include <ttrules/bdd.hpp>
#include <ttrules/error.hpp>
#include <ttrules/evaluation.hpp>
#include <ttrules/pipeline.hpp>
#include <ttrules/util.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

using namespace ttrules;

namespace
{

struct overrides
{
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<double> corr_threshold;
  bool unseen_dontcare = false;
  bool ternary_head = false;
  std::optional<std::string> out;
};

void apply( pipeline_config& config, overrides const& o )
{
  if ( o.seed )
  {
    config.seed = *o.seed;
    config.training.seed = *o.seed;
  }
  if ( o.jobs )
    config.jobs = *o.jobs;
  if ( o.corr_threshold )
    config.corr_threshold = *o.corr_threshold;
  if ( o.unseen_dontcare )
    config.dont_cares.unseen = true;
  if ( o.ternary_head )
    config.head = head_mode::ternary;
  if ( o.out )
    config.out = *o.out;
  validate( config );
}

/* absolute paths, so artifacts can be used from any working directory */
void canonicalize_paths( pipeline_config& config )
{
  config.data = std::filesystem::weakly_canonical( config.data );
  config.schema = std::filesystem::weakly_canonical( config.schema );
}

std::string file_checksum( std::filesystem::path const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw schema_error( "cannot open data file " + path.string() );
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return hex64( fnv1a64( buffer.str() ) );
}

raw_dataset load_data( pipeline_config const& config )
{
  auto const s = load_schema( config.schema );
  if ( config.task && *config.task != s.task.kind )
    throw config_error( "task mismatch: config asks for " + to_string( *config.task ) + " but the schema declares " +
                        to_string( s.task.kind ) );
  return load_csv( config.data, s );
}

nlohmann::json provenance( pipeline_config const& config )
{
  return { { "config", to_json( config ) },
           { "config_hash", config_hash( config ) },
           { "seed", config.seed },
           { "data_checksum", file_checksum( config.data ) } };
}

nlohmann::json load_artifact( std::filesystem::path const& path, std::string const& format )
{
  if ( !std::filesystem::exists( path ) )
    throw config_error( "artifact " + path.string() + " does not exist" );
  auto j = read_json( path );
  verify_seal( j, path.string() );
  if ( j.value( "format", std::string{} ) != format )
    throw config_error( path.string() + " is not a " + format + " file" );
  return j;
}

int cmd_train( std::string const& config_path, overrides const& o )
{
  auto config = load_config( config_path );
  apply( config, o );
  canonicalize_paths( config );
  auto const raw = load_data( config );
  auto const trained = train_model( config, raw );

  auto artifact = provenance( config );
  artifact["format"] = "ttrules-model-artifact";
  artifact["model"] = to_json( trained.model );
  artifact["binarizer"] = trained.map.to_json();
  nlohmann::json history = nlohmann::json::array();
  for ( auto const& e : trained.training.history )
    history.push_back( { { "epoch", e.epoch }, { "train_loss", e.train_loss }, { "val_metric", e.val_metric } } );
  artifact["training"] = { { "best_epoch", trained.training.best_epoch }, { "history", history } };
  if ( trained.ternarization )
  {
    nlohmann::json trace = nlohmann::json::array();
    for ( auto const& step : trained.ternarization->trace )
      trace.push_back( { { "threshold", step.threshold }, { "metric", step.metric }, { "kept", step.kept } } );
    artifact["ternarization"] = { { "threshold", trained.ternarization->threshold },
                                  { "float_metric", trained.ternarization->float_metric },
                                  { "ternary_metric", trained.ternarization->ternary_metric },
                                  { "trace", trace } };
  }
  auto const model_path = config.out / "model.json";
  write_json( model_path, seal( artifact ) );

  auto binarizer = provenance( config );
  binarizer["format"] = "ttrules-binarizer-artifact";
  binarizer["binarizer"] = trained.map.to_json();
  write_json( config.out / "binarizer.json", seal( binarizer ) );

  auto const& best = trained.training.history[trained.training.best_epoch];
  std::printf( "input_bits=%zu filters=%zu best_epoch=%zu\n", trained.map.total_bits(), trained.model.n_filters(),
               trained.training.best_epoch );
  std::printf( "val_%s=%.6f\n", metric_name( raw.spec.task ).c_str(),
               trained.ternarization ? trained.ternarization->ternary_metric : best.val_metric );
  std::printf( "model=%s\n", model_path.string().c_str() );
  return 0;
}

int cmd_extract( std::string const& model_path, overrides const& o )
{
  auto const artifact = load_artifact( model_path, "ttrules-model-artifact" );
  auto config = config_from_json( artifact.at( "config" ) );
  auto const original_hash = artifact.at( "config_hash" ).get<std::string>();
  if ( config_hash( config ) != original_hash )
    throw config_error( model_path + ": embedded config does not match its hash" );
  if ( o.seed )
    throw config_error( "--seed does not apply to extract; the model fixes it" );
  apply( config, o );
  if ( !o.out )
    config.out = std::filesystem::path( model_path ).parent_path();
  if ( file_checksum( config.data ) != artifact.at( "data_checksum" ).get<std::string>() )
    throw value_error( "data file " + config.data.string() + " changed since the model was trained" );

  auto const model = model_from_json( artifact.at( "model" ) );
  auto const map = binarizer_map::from_json( artifact.at( "binarizer" ) );
  auto const data = binarize( load_data( config ), map );
  auto const verified = extract_and_verify( config, model, map, data );

  auto out = provenance( config );
  out["format"] = "ttrules-ruleset-artifact";
  out["model_checksum"] = artifact.at( "checksum" );
  out["model_config_hash"] = original_hash;
  out["ruleset"] = to_json( verified.optimized.rules );
  out["report"] = { { "extracted_rules", verified.extracted_rules },
                    { "optimization", verified.optimized.report.to_json() },
                    { "agreement", verified.agreement.to_json() },
                    { "lossless", config.lossless() } };
  auto const path = config.out / "ruleset.json";
  write_json( path, seal( out ) );
  write_text( config.out / "rules.txt", to_text( verified.optimized.rules ) );

  auto const& report = verified.optimized.report;
  std::printf( "rules_extracted=%zu rules_optimized=%zu\n", verified.extracted_rules, verified.optimized.rules.size() );
  std::printf( "passes: constant_folding=%zu exact_merge=%zu complement_merge=%zu correlation_pruning=%zu\n",
               report.after_constant_folding, report.after_exact_merge, report.after_complement_merge,
               report.after_correlation_pruning );
  if ( !config.lossless() )
    std::printf( "train_agreement_after_pruning=%.6f\n", report.train_agreement );
  std::printf( "agreement=%.6f\n", verified.agreement.agreement );
  std::printf( "ruleset=%s\n", path.string().c_str() );
  return 0;
}

int cmd_eval( std::string const& config_path, overrides const& o )
{
  auto config = load_config( config_path );
  apply( config, o );
  canonicalize_paths( config );
  auto const raw = load_data( config );
  auto const start = std::chrono::steady_clock::now();
  auto const summary = cross_validate( config, raw, config.folds, config.seed );
  auto const seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();

  auto results = provenance( config );
  results["format"] = "ttrules-cv-results";
  auto cv = summary.to_json();
  cv.erase( "fold_seconds" );
  results["cv"] = cv;
  write_json( config.out / "cv_results.json", seal( results ) );

  /* wall-clock figures live outside the sealed, reproducible results */
  write_json( config.out / "cv_timing.json", { { "fold_seconds", summary.fold_seconds }, { "total_seconds", seconds } } );

  auto const row = format_table_row( config.data.stem().string(), summary );
  write_text( config.out / "cv_table.txt", row + "\n" );
  std::printf( "%s\n", row.c_str() );
  return 0;
}

std::string file_safe( std::string name )
{
  for ( auto& c : name )
    if ( !std::isalnum( static_cast<unsigned char>( c ) ) && c != '_' && c != '-' )
      c = '_';
  return name;
}

int cmd_export( std::string const& ruleset_path, bool dot, bool text, std::optional<std::string> const& out_dir )
{
  if ( dot == text )
    throw config_error( "export needs exactly one of --dot or --text" );
  auto const artifact = load_artifact( ruleset_path, "ttrules-ruleset-artifact" );
  auto const rs = ruleset_from_json( artifact.at( "ruleset" ) );
  std::filesystem::path const out = out_dir ? std::filesystem::path( *out_dir ) : std::filesystem::path( ruleset_path ).parent_path();

  if ( text )
  {
    auto const path = out / "rules.txt";
    write_text( path, to_text( rs ) );
    std::printf( "rules=%zu text=%s\n", rs.size(), path.string().c_str() );
    return 0;
  }

  /* one shared store keeps every diagram under the same variable order */
  std::vector<std::size_t> order( rs.input_bits );
  std::iota( order.begin(), order.end(), std::size_t{ 0 } );
  bdd_store store( order );
  auto const dot_dir = out / "dot";
  std::filesystem::create_directories( dot_dir );
  for ( auto const& r : rs.rules )
  {
    auto const root = build_from_dnf( store, r.formula );
    write_text( dot_dir / ( file_safe( r.name ) + ".dot" ), to_dot( store, root, rs.map.bit_names(), r.name ) );
  }
  std::printf( "rules=%zu dot=%s\n", rs.size(), dot_dir.string().c_str() );
  return 0;
}

int exit_code( error_kind kind )
{
  switch ( kind )
  {
  case error_kind::config: return 2;
  case error_kind::data: return 3;
  case error_kind::exactness: return 4;
  default: return 1;
  }
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Truth-table rule extraction for tabular data" };
  app.require_subcommand( 1 );

  overrides o;
  std::string config_path, model_path, ruleset_path;
  std::optional<std::string> export_out;
  bool dot = false, text = false;

  auto add_common = [&]( CLI::App* sub ) {
    sub->add_option( "--jobs", o.jobs, "worker threads" )->check( CLI::PositiveNumber );
    sub->add_option( "--corr-threshold", o.corr_threshold, "correlation pruning threshold in (0, 1]; 1 disables pruning" );
    sub->add_flag( "--unseen-dontcare", o.unseen_dontcare, "treat patches absent from the training rows as don't-cares" );
    sub->add_option( "--out", o.out, "output directory" );
  };

  auto* train = app.add_subcommand( "train", "train a network and write model.json" );
  train->add_option( "--config", config_path, "pipeline config" )->required();
  train->add_option( "--seed", o.seed, "random seed" );
  train->add_flag( "--ternary-head", o.ternary_head, "ternarize the linear head" );
  add_common( train );

  auto* extract = app.add_subcommand( "extract", "extract, optimize and verify rules from a model" );
  extract->add_option( "--model", model_path, "model.json written by train" )->required();
  add_common( extract );

  auto* eval = app.add_subcommand( "eval", "cross-validate the whole pipeline" );
  eval->add_option( "--config", config_path, "pipeline config" )->required();
  eval->add_option( "--seed", o.seed, "random seed" );
  eval->add_flag( "--ternary-head", o.ternary_head, "ternarize the linear head" );
  add_common( eval );

  auto* exp = app.add_subcommand( "export", "write rules as DOT diagrams or text" );
  exp->add_option( "--ruleset", ruleset_path, "ruleset.json written by extract" )->required();
  exp->add_flag( "--dot", dot, "one DOT file per rule" );
  exp->add_flag( "--text", text, "one line per rule" );
  exp->add_option( "--out", export_out, "output directory" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e );
    return code == 0 ? 0 : 2;
  }

  try
  {
    if ( *train )
      return cmd_train( config_path, o );
    if ( *extract )
      return cmd_extract( model_path, o );
    if ( *eval )
      return cmd_eval( config_path, o );
    return cmd_export( ruleset_path, dot, text, export_out );
  }
  catch ( ttrules::error const& e )
  {
    std::fprintf( stderr, "error: %s\n", e.what() );
    return exit_code( e.kind() );
  }
  catch ( std::filesystem::filesystem_error const& e )
  {
    std::fprintf( stderr, "error: %s\n", e.what() );
    return 2;
  }
  catch ( std::exception const& e )
  {
    std::fprintf( stderr, "error: %s\n", e.what() );
    return 1;
  }
}
