/* Acceptance harness: one PASS/FAIL line per criterion. Exit status is
   nonzero when any criterion fails. */

#include "helpers.hpp"
#include "oracles.hpp"

#include <ttrules/bdd.hpp>
#include <ttrules/error.hpp>
#include <ttrules/evaluation.hpp>
#include <ttrules/extraction.hpp>
#include <ttrules/logic.hpp>
#include <ttrules/metrics.hpp>
#include <ttrules/pipeline.hpp>
#include <ttrules/ruleset.hpp>
#include <ttrules/util.hpp>

#include <sys/resource.h>

#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace ttrules;

namespace
{

using clock_type = std::chrono::steady_clock;

double seconds_since( clock_type::time_point start )
{
  return std::chrono::duration<double>( clock_type::now() - start ).count();
}

struct verdict
{
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report( int id, std::string const& title, std::function<verdict()> const& body )
{
  auto const start = clock_type::now();
  verdict v;
  try
  {
    v = body();
  }
  catch ( std::exception const& e )
  {
    v = { false, std::string{ "exception: " } + e.what() };
  }
  if ( !v.pass )
    ++failures;
  std::printf( "%s criterion %d (%s): %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), v.detail.c_str(),
               seconds_since( start ) );
  std::fflush( stdout );
}

std::filesystem::path source_dir()
{
  return TTRULES_SOURCE_DIR;
}

pipeline_config breast_cancer_config()
{
  return load_config( source_dir() / "configs" / "breast_cancer.json" );
}

raw_dataset breast_cancer_data( pipeline_config const& config )
{
  return load_csv( config.data, load_schema( config.schema ) );
}

/* mixed encoding over 12 bits: thermometer (4), one-hot (3), 5 binary flags */
binarizer_map mixed_map()
{
  std::vector<feature_encoding> features;
  feature_encoding x;
  x.name = "x";
  x.kind = feature_kind::continuous;
  x.thresholds = { 1.0, 2.0, 3.0, 4.0 };
  features.push_back( x );
  feature_encoding c;
  c.name = "c";
  c.kind = feature_kind::categorical;
  c.categories = { "A", "B", "C" };
  features.push_back( c );
  for ( int i = 0; i < 5; ++i )
  {
    feature_encoding b;
    b.name = "b" + std::to_string( i );
    b.kind = feature_kind::binary;
    features.push_back( b );
  }
  return binarizer_map( features );
}

/* criterion 1 ------------------------------------------------------------ */

verdict exactness_headline( cv_summary const& bc_float, cv_summary const& bc_ternary )
{
  std::size_t models = 0;
  std::size_t exhaustive_inputs = 0;
  std::ostringstream fails;

  auto const check_fold_details = [&]( cv_summary const& s, std::string const& name ) {
    for ( auto const& d : s.fold_details )
    {
      ++models;
      for ( auto const* split : { "train_agreement", "test_agreement" } )
        if ( d.at( split ).at( "agreement" ).get<double>() != 1.0 )
          fails << name << " fold " << d.at( "fold" ) << ' ' << split << "; ";
    }
  };
  check_fold_details( bc_float, "breast-cancer float" );
  check_fold_details( bc_ternary, "breast-cancer ternary" );

  /* small trained models: exhaustive over every input vector */
  for ( std::uint64_t seed = 0; seed < 6; ++seed )
  {
    auto const bits = 10 + seed;
    auto const task = seed % 3 == 2 ? task_type{ task_kind::multiclass, 3 }
                                    : ( seed % 3 == 1 ? task_type{ task_kind::regression, 0 } : task_type{} );
    auto const data = test::random_binary_dataset( 300, bits, 5, 0.05, 100 + seed, task );
    auto const val = test::random_binary_dataset( 100, bits, 5, 0.05, 200 + seed, task );
    training_params hp;
    hp.epochs = 20;
    hp.seed = seed;
    auto const model = train( build_model( bits, 6, 4, 4, task, seed ), data, val, hp ).model;
    auto const rs = optimize_ruleset( extract_rules( model, data.map, data ), data ).rules;
    auto const all = enumerate_inputs( data.map, task, false );
    for ( auto const* ds : { &data, &val, &all } )
    {
      auto const r = verify_exactness( rs, model, *ds );
      if ( r.agreement != 1.0 || r.max_score_difference > 1e-9 )
        fails << "synthetic seed " << seed << "; ";
    }
    exhaustive_inputs += all.size();
    ++models;
  }

  /* mixed encoding: encoding don't-cares exact on every encodable input;
     without them exact on all 2^12 inputs */
  {
    auto const map = mixed_map();
    auto const encodable = enumerate_inputs( map, task_type{}, true );
    auto const all = enumerate_inputs( map, task_type{}, false );
    for ( std::uint64_t seed = 0; seed < 4; ++seed )
    {
      auto const model = build_model( 12, 8, 5, 4, task_type{}, seed );
      auto const with_dc = optimize_ruleset( extract_rules( model, map, encodable ), encodable ).rules;
      auto const without = optimize_ruleset( extract_rules( model, map, all, { { false, false }, 1 } ), all ).rules;
      if ( verify_exactness( with_dc, model, encodable ).agreement != 1.0 )
        fails << "mixed encoding seed " << seed << "; ";
      if ( verify_exactness( without, model, all ).agreement != 1.0 )
        fails << "mixed plain seed " << seed << "; ";
      exhaustive_inputs += encodable.size() + all.size();
      models += 2;
    }
  }

  auto const f = fails.str();
  std::ostringstream d;
  d << models << " models, agreement 1.0 on train/test rows; " << exhaustive_inputs << " exhaustive inputs checked";
  if ( !f.empty() )
    d << "; failures: " << f;
  return { f.empty(), d.str() };
}

/* criterion 4 ------------------------------------------------------------ */

verdict qm_oracle()
{
  std::mt19937_64 rng( 4 );
  std::size_t mismatches = 0, too_many = 0, not_minimal_k2 = 0;
  std::size_t cubes = 0, minterms = 0;
  for ( int i = 0; i < 200; ++i )
  {
    auto const k = 2 + rng() % 5;
    truth_table t;
    t.inputs.resize( k );
    std::iota( t.inputs.begin(), t.inputs.end(), std::size_t{ 0 } );
    t.outputs.resize( std::size_t{ 1 } << k );
    t.dont_care.resize( t.outputs.size() );
    std::size_t on = 0;
    for ( auto r = 0u; r < t.rows(); ++r )
    {
      t.outputs[r] = rng() & 1u;
      t.dont_care[r] = rng() % 4 == 0 ? 1u : 0u;
      on += t.outputs[r] && !t.dont_care[r] ? 1u : 0u;
    }
    auto const f = minimize_qm( t );
    /* independent check of every constrained row */
    for ( std::uint32_t r = 0; r < t.rows(); ++r )
    {
      bool value = false;
      for ( auto const& c : f.cubes )
        value = value || ( r & c.care ) == c.value;
      if ( !t.dont_care[r] && value != static_cast<bool>( t.outputs[r] ) )
        ++mismatches;
    }
    too_many += f.cubes.size() > on ? 1u : 0u;
    if ( k == 2 )
    {
      std::vector<std::uint8_t> care_only( 4 );
      bool has_dc = false;
      for ( auto r = 0u; r < 4; ++r )
      {
        care_only[r] = t.outputs[r];
        has_dc = has_dc || t.dont_care[r];
      }
      if ( !has_dc && f.cubes.size() != oracle::min_dnf_cubes_k2( care_only ) )
        ++not_minimal_k2;
    }
    cubes += f.cubes.size();
    minterms += on;
  }
  std::ostringstream d;
  d << "200 tables k in 2..6: " << mismatches << " row mismatches, " << too_many << " covers larger than the minterm count, "
    << cubes << " cubes vs " << minterms << " minterms in total";
  return { mismatches == 0 && too_many == 0 && not_minimal_k2 == 0, d.str() };
}

/* criterion 5 ------------------------------------------------------------ */

verdict bdd_canonicity()
{
  std::mt19937_64 rng( 5 );
  std::size_t distinct_refs = 0, size_mismatch = 0, invariant_failures = 0;
  for ( int i = 0; i < 500; ++i )
  {
    auto const k = 1 + rng() % 6;
    truth_table t;
    t.inputs.resize( k );
    std::iota( t.inputs.begin(), t.inputs.end(), std::size_t{ 0 } );
    t.outputs.resize( std::size_t{ 1 } << k );
    t.dont_care.assign( t.outputs.size(), 0 );
    for ( auto& o : t.outputs )
      o = rng() & 1u;
    bdd_store store( t.inputs );
    auto const a = build_from_dnf( store, minimize_qm( t ) );
    auto const b = build_from_dnf( store, minterm_dnf( t ) );
    /* third route: Shannon expansion through apply */
    auto c = store.constant( false );
    for ( std::uint32_t r = 0; r < t.rows(); ++r )
    {
      if ( !t.outputs[r] )
        continue;
      auto m = store.constant( true );
      for ( auto j = 0u; j < k; ++j )
      {
        auto const v = store.variable( j );
        m = store.apply( bdd_op::conjunction, m, ( r >> j ) & 1u ? v : store.negate( v ) );
      }
      c = store.apply( bdd_op::disjunction, c, m );
    }
    distinct_refs += !( a == b ) || !( a == c ) ? 1u : 0u;
    size_mismatch += store.node_count( a ) != oracle::robdd_size( t.outputs, k ) ? 1u : 0u;
    invariant_failures += store.check_invariants( a ).empty() ? 0u : 1u;
  }
  std::ostringstream xor_counts;
  bool xor_ok = true;
  for ( std::size_t n : { 2u, 3u, 4u } )
  {
    std::vector<std::size_t> order( n );
    std::iota( order.begin(), order.end(), std::size_t{ 0 } );
    bdd_store store( order );
    auto f = store.constant( false );
    for ( auto j = 0u; j < n; ++j )
      f = store.apply( bdd_op::exclusive_or, f, store.variable( j ) );
    xor_ok = xor_ok && store.node_count( f ) == 2 * n - 1 && store.check_invariants( f ).empty();
    xor_counts << " XOR" << n << "=" << store.node_count( f );
  }
  std::ostringstream d;
  d << "500 functions: " << distinct_refs << " ref disagreements, " << size_mismatch << " size mismatches vs oracle, "
    << invariant_failures << " invariant violations;" << xor_counts.str();
  return { distinct_refs == 0 && size_mismatch == 0 && invariant_failures == 0 && xor_ok, d.str() };
}

/* criterion 6 ------------------------------------------------------------ */

verdict gradient_check()
{
  std::vector<std::size_t> rows( 16 );
  std::iota( rows.begin(), rows.end(), std::size_t{ 0 } );
  training_params hp;
  hp.weight_decay = 1e-3;
  hp.l1_head = 1e-3;
  double worst = 0.0;
  std::ostringstream d;
  for ( auto const task : { task_type{}, task_type{ task_kind::multiclass, 3 }, task_type{ task_kind::regression, 0 } } )
  {
    auto const data = test::random_binary_dataset( 16, 14, 5, 0.1, 6, task );
    auto model = build_model( 14, 5, 4, 4, task, 6 );
    if ( task.kind == task_kind::regression )
      model.standardization = { 2.0, 1.5 };
    auto const e = test::gradient_check( model, data, rows, hp );
    worst = std::max( worst, e );
    d << to_string( task.kind ) << "=" << e << " ";
  }
  d << "(max relative error, bound 1e-3)";
  return { worst <= 1e-3, d.str() };
}

/* criterion 7 ------------------------------------------------------------ */

double peak_rss_gb()
{
  rusage usage{};
  getrusage( RUSAGE_SELF, &usage );
  return static_cast<double>( usage.ru_maxrss ) / ( 1024.0 * 1024.0 ); /* ru_maxrss is in KiB */
}

verdict scalability()
{
  auto const start = clock_type::now();
  std::size_t const features = 20000, samples = 2000, filters = 1064, fan_in = 6;
  auto const data = test::random_binary_dataset( samples, features, 9, 0.05, 7 );
  auto const split = kfold_split( data, 5, 7 ).front();
  auto const fit = subset( data, split.train );
  auto const val = subset( data, split.test );

  set_warning_sink( []( std::string const& ) {} );
  auto const initial = build_model( features, filters, fan_in, 4, task_type{}, 7 );
  set_warning_sink( nullptr );
  training_params hp;
  hp.epochs = 3;
  hp.l1_head = 1e-3;
  hp.seed = 7;
  auto const trained = train( initial, fit, val, hp );
  auto model = trained.model;
  /* zero small head weights, as a sparse head would */
  for ( auto& w : model.head.weights )
    if ( std::abs( w ) < 0.01 )
      w = 0.0;

  std::size_t nonzero = 0;
  std::set<std::size_t> read_bits;
  for ( auto f = 0u; f < model.n_filters(); ++f )
    if ( model.head.weights[f] != 0.0 )
    {
      ++nonzero;
      read_bits.insert( model.filters[f].inputs.begin(), model.filters[f].inputs.end() );
    }
  auto const rules = extract_rules( model, data.map, fit );
  auto const optimized = optimize_ruleset( rules, fit );
  auto const agreement = verify_exactness( optimized.rules, model, data );
  auto const elapsed = seconds_since( start );
  auto const memory = peak_rss_gb();

  std::ostringstream d;
  d << features << " features x " << samples << " samples, " << hp.epochs << " epochs: " << rules.size() << " rules from "
    << nonzero << " nonzero-weight filters (" << optimized.rules.size() << " after optimization), reading " << read_bits.size()
    << " of " << features << " features; agreement " << agreement.agreement << "; " << elapsed << " s, peak "
    << memory << " GB";
  auto const pass = rules.size() == nonzero && agreement.agreement == 1.0 && elapsed < 600.0 && memory < 4.0 &&
                    read_bits.size() <= filters * fan_in;
  return { pass, d.str() };
}

/* criterion 8 ------------------------------------------------------------ */

verdict metric_goldens()
{
  struct golden
  {
    char const* name;
    double value;
    double expected;
  };
  std::vector<golden> const goldens{
      { "auc perfect", auc( std::vector<double>{ 0.9, 0.8, 0.3, 0.2 }, std::vector<double>{ 1, 1, 0, 0 } ), 1.0 },
      { "auc ties", auc( std::vector<double>{ 0.5, 0.5, 0.5, 0.5 }, std::vector<double>{ 1, 0, 1, 0 } ), 0.5 },
      { "auc 3 of 4", auc( std::vector<double>{ 0.9, 0.2, 0.8, 0.3 }, std::vector<double>{ 1, 0, 0, 1 } ), 0.75 },
      { "auc monotone", auc( std::vector<double>{ 2.8, 1.4, 2.6, 1.6 }, std::vector<double>{ 1, 0, 0, 1 } ), 0.75 },
      { "accuracy identity", accuracy( std::vector<double>{ 0, 1, 2 }, std::vector<double>{ 0, 1, 2 } ), 1.0 },
      { "accuracy 1 of 4", accuracy( std::vector<double>{ 1, 0, 0, 0 }, std::vector<double>{ 1, 1, 1, 1 } ), 0.25 },
      { "rmse identity", rmse( std::vector<double>{ 1.5, -2.0 }, std::vector<double>{ 1.5, -2.0 } ), 0.0 },
      { "rmse", rmse( std::vector<double>{ 0, 0 }, std::vector<double>{ 3, 4 } ), std::sqrt( 12.5 ) },
  };
  std::size_t wrong = 0;
  std::ostringstream d;
  for ( auto const& g : goldens )
    if ( std::abs( g.value - g.expected ) > 1e-9 )
    {
      ++wrong;
      d << g.name << "=" << g.value << " ";
    }
  d << goldens.size() - wrong << "/" << goldens.size() << " worked examples within 1e-9";
  return { wrong == 0, d.str() };
}

/* criterion 9 ------------------------------------------------------------ */

verdict lossless_invariance()
{
  std::mt19937_64 rng( 9 );
  double worst = 0.0;
  std::size_t models = 0, inputs = 0;
  for ( std::uint64_t seed = 0; seed < 12; ++seed )
  {
    auto const bits = seed % 2 ? std::size_t{ 14 } : std::size_t{ 40 };
    auto const task = seed % 3 == 0 ? task_type{ task_kind::multiclass, 3 } : task_type{};
    auto const data = test::random_binary_dataset( 200, bits, 5, 0.05, seed, task );
    training_params hp;
    hp.epochs = 10;
    hp.seed = seed;
    auto const model = train( build_model( bits, 24, 1 + seed % 4, 3, task, seed ), data, data, hp ).model;
    auto const rs = extract_rules( model, data.map, data );
    auto const opt = optimize_ruleset( rs, data, 1.0 ).rules;
    auto probe = [&]( std::span<std::uint8_t const> x ) {
      auto const a = scores( rs, x );
      auto const b = scores( opt, x );
      for ( auto c = 0u; c < a.size(); ++c )
        worst = std::max( worst, std::abs( a[c] - b[c] ) );
      ++inputs;
    };
    if ( bits <= 16 )
    {
      auto const all = enumerate_inputs( data.map, task, false );
      for ( auto r = 0u; r < all.size(); ++r )
        probe( all.row( r ) );
    }
    else
      for ( int i = 0; i < 1000; ++i )
        probe( test::random_bits( rng, bits ) );
    ++models;
  }
  std::ostringstream d;
  d << models << " models, " << inputs << " inputs (exhaustive for <= 16 bits): max score change " << worst;
  return { worst <= 1e-12, d.str() };
}

} // namespace

int main()
{
  auto const config = breast_cancer_config();
  auto const raw = breast_cancer_data( config );

  cv_summary bc_float, bc_ternary;
  double bc_seconds = 0.0;
  {
    auto const start = clock_type::now();
    bc_float = cross_validate( config, raw, 5, config.seed );
    bc_seconds = seconds_since( start );
    auto ternary = config;
    ternary.head = head_mode::ternary;
    bc_ternary = cross_validate( ternary, raw, 5, config.seed );
  }

  report( 1, "exactness headline", [&] { return exactness_headline( bc_float, bc_ternary ); } );

  report( 2, "Breast Cancer 5-fold AUC", [&] {
    std::ostringstream d;
    d << "mean AUC " << bc_float.mean << " ± " << bc_float.std << " over " << raw.size()
      << " rows (reference 0.986; threshold 0.95), " << bc_seconds << " s";
    return verdict{ bc_float.mean >= 0.95 && bc_seconds < 300.0, d.str() };
  } );

  report( 3, "ternarized rule count", [&] {
    std::size_t most = 0;
    std::ostringstream d;
    d << "rules per fold [";
    for ( auto i = 0u; i < bc_ternary.fold_rules.size(); ++i )
    {
      most = std::max( most, bc_ternary.fold_rules[i] );
      d << ( i ? ", " : "" ) << bc_ternary.fold_rules[i];
    }
    d << "], bound 40, reference model size 24 rules; ternary AUC " << bc_ternary.mean << " vs float " << bc_float.mean;
    return verdict{ most <= 40, d.str() };
  } );

  report( 4, "Quine-McCluskey oracle", qm_oracle );
  report( 5, "ROBDD canonicity", bdd_canonicity );
  report( 6, "gradient check", gradient_check );
  report( 7, "scalability", scalability );
  /* user-supplied datasets (comma-separated config paths) are reported
     informationally, without a verdict */
  if ( auto const* extra = std::getenv( "TTRULES_EXTRA_CONFIGS" ) )
  {
    std::stringstream list( extra );
    std::string path;
    while ( std::getline( list, path, ',' ) )
    {
      try
      {
        auto const c = load_config( path );
        auto const data = load_csv( c.data, load_schema( c.schema ) );
        auto const s = cross_validate( c, data, c.folds, c.seed );
        std::printf( "INFO %s\n", format_table_row( c.data.stem().string(), s ).c_str() );
      }
      catch ( std::exception const& e )
      {
        std::printf( "INFO %s: %s\n", path.c_str(), e.what() );
      }
    }
  }

  report( 8, "metric golden values", metric_goldens );
  report( 9, "lossless optimization invariance", lossless_invariance );

  std::printf( "%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures );
  return failures ? 1 : 0;
}
