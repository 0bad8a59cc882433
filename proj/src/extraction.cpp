#include <ttrules/extraction.hpp>

#include <ttrules/error.hpp>
#include <ttrules/util.hpp>

#include <algorithm>
#include <map>

namespace ttrules
{

truth_table enumerate_truth_table( ttnet_model const& model, std::size_t filter_id )
{
  if ( filter_id >= model.filters.size() )
    throw value_error( "no filter " + std::to_string( filter_id ) );
  auto const& filter = model.filters[filter_id];
  auto const k = filter.fan_in();
  if ( k > max_fan_in )
    throw parameter_error( "filter " + std::to_string( filter_id ) + " has fan-in " + std::to_string( k ) +
                           "; its truth table is too large to enumerate" );
  truth_table table;
  table.inputs = filter.inputs;
  table.origin = filter_id;
  table.outputs.resize( std::size_t{ 1 } << k );
  table.dont_care.assign( table.outputs.size(), 0u );
  std::uint8_t patch[max_fan_in];
  for ( std::uint32_t r = 0; r < table.outputs.size(); ++r )
  {
    for ( auto j = 0u; j < k; ++j )
      patch[j] = ( r >> j ) & 1u;
    table.outputs[r] = filter_forward( filter, { patch, k } ) ? 1u : 0u;
  }
  return table;
}

std::vector<std::uint32_t> count_patches( std::span<std::size_t const> inputs, binarized_dataset const& data )
{
  std::vector<std::uint32_t> counts( std::size_t{ 1 } << inputs.size(), 0u );
  for ( auto r = 0u; r < data.size(); ++r )
  {
    auto const row = data.row( r );
    std::uint32_t local = 0;
    for ( auto j = 0u; j < inputs.size(); ++j )
      if ( row[inputs[j]] )
        local |= 1u << j;
    ++counts[local];
  }
  return counts;
}

namespace
{

/* local variables of the patch grouped by the feature they encode */
struct feature_group
{
  feature_kind kind;
  bool complete = false;                                      /* every bit of the feature is in the patch */
  std::vector<std::pair<std::size_t, std::size_t>> members;  /* (local variable, position) */
};

std::vector<feature_group> group_by_feature( std::span<std::size_t const> inputs, binarizer_map const& map )
{
  std::map<std::size_t, feature_group> groups;
  for ( auto j = 0u; j < inputs.size(); ++j )
  {
    if ( inputs[j] >= map.total_bits() )
      throw value_error( "bit " + std::to_string( inputs[j] ) + " is outside the binarizer map" );
    auto const& origin = map.origin( inputs[j] );
    if ( origin.kind == feature_kind::binary )
      continue;
    auto& g = groups[origin.feature];
    g.kind = origin.kind;
    g.members.emplace_back( j, origin.position );
  }
  std::vector<feature_group> out;
  for ( auto& [feature, g] : groups )
  {
    g.complete = g.members.size() == map.features()[feature].width;
    if ( g.members.size() > 1 || ( g.kind == feature_kind::categorical && g.complete ) )
      out.push_back( std::move( g ) );
  }
  return out;
}

bool violates( std::uint32_t row, feature_group const& g )
{
  if ( g.kind == feature_kind::continuous )
  {
    /* bit for a higher threshold set while a lower one is clear */
    for ( auto const& [a, pa] : g.members )
      for ( auto const& [b, pb] : g.members )
        if ( pa < pb && !( ( row >> a ) & 1u ) && ( ( row >> b ) & 1u ) )
          return true;
    return false;
  }
  std::size_t set = 0;
  for ( auto const& [j, _] : g.members )
    set += ( row >> j ) & 1u;
  return set > 1 || ( g.complete && set == 0 );
}

} // namespace

truth_table inject_dont_cares( truth_table table, binarizer_map const& map, dont_care_options const& options,
                               std::span<std::uint32_t const> support )
{
  if ( options.encoding )
  {
    auto const groups = group_by_feature( table.inputs, map );
    for ( std::uint32_t r = 0; r < table.rows(); ++r )
      for ( auto const& g : groups )
        if ( violates( r, g ) )
          table.dont_care[r] = 1u;
  }
  if ( options.unseen )
  {
    if ( support.size() != table.rows() )
      throw value_error( "unseen-pattern don't-cares need patch support for every row" );
    for ( std::uint32_t r = 0; r < table.rows(); ++r )
      if ( support[r] == 0 )
        table.dont_care[r] = 1u;
  }
  return table;
}

bool is_encodable( std::span<std::uint8_t const> input, binarizer_map const& map )
{
  for ( auto const& f : map.features() )
  {
    auto const bits = input.subspan( f.first_bit, f.width );
    if ( f.kind == feature_kind::continuous )
    {
      for ( auto j = 1u; j < bits.size(); ++j )
        if ( bits[j] && !bits[j - 1] )
          return false;
    }
    else if ( f.kind == feature_kind::categorical )
    {
      if ( std::count( bits.begin(), bits.end(), std::uint8_t{ 1 } ) != 1 )
        return false;
    }
  }
  return true;
}

rule_set extract_rules( ttnet_model const& model, binarizer_map const& map, binarized_dataset const& support,
                        extraction_options const& options )
{
  validate( model );
  if ( map.total_bits() != model.input_bits )
    throw shape_error( "binarizer map has " + std::to_string( map.total_bits() ) + " bits, model reads " +
                       std::to_string( model.input_bits ) );
  if ( options.dont_cares.unseen && support.total_bits != model.input_bits )
    throw shape_error( "support dataset width does not match the model" );

  auto const& head = model.head;
  std::vector<std::size_t> active;
  for ( auto f = 0u; f < model.filters.size(); ++f )
    for ( auto c = 0u; c < head.n_outputs; ++c )
      if ( head.weight( c, f ) != 0.0 )
      {
        active.push_back( f );
        break;
      }

  std::vector<rule> rules( active.size() );
  parallel_for( active.size(), options.jobs, [&]( std::size_t i ) {
    auto const f = active[i];
    auto table = enumerate_truth_table( model, f );
    std::vector<std::uint32_t> counts;
    if ( options.dont_cares.unseen )
      counts = count_patches( table.inputs, support );
    table = inject_dont_cares( std::move( table ), map, options.dont_cares, counts );
    auto& r = rules[i];
    r.formula = minimize_qm( table );
    if ( !agrees( r.formula, table ) )
      throw extraction_error( "minimized formula of filter " + std::to_string( f ) + " disagrees with its truth table" );
    r.name = "rule_" + std::to_string( f );
    r.source_filter = f;
    for ( auto c = 0u; c < head.n_outputs; ++c )
      r.weights.push_back( head.weight( c, f ) );
  } );

  rule_set rs;
  rs.rules = std::move( rules );
  rs.bias = head.bias;
  rs.task = model.task;
  rs.mode = head.mode;
  rs.input_bits = model.input_bits;
  rs.map = map;
  rs.standardization = model.standardization;
  rs.provenance = model.provenance;
  rs.provenance["dont_care"] = { { "encoding", options.dont_cares.encoding }, { "unseen", options.dont_cares.unseen } };
  return rs;
}

binarized_dataset enumerate_inputs( binarizer_map const& map, task_type const& task, bool encodable_only )
{
  auto const n = map.total_bits();
  if ( n > 20 )
    throw parameter_error( "refusing to enumerate 2^" + std::to_string( n ) + " inputs" );
  binarized_dataset ds;
  ds.total_bits = n;
  ds.task = task;
  ds.map = map;
  std::vector<std::uint8_t> row( n );
  for ( std::uint64_t x = 0; x < ( std::uint64_t{ 1 } << n ); ++x )
  {
    for ( auto j = 0u; j < n; ++j )
      row[j] = ( x >> j ) & 1u;
    if ( encodable_only && !is_encodable( row, map ) )
      continue;
    ds.bits.insert( ds.bits.end(), row.begin(), row.end() );
    ds.targets.push_back( 0.0 );
    ++ds.n_samples;
  }
  return ds;
}

} // namespace ttrules
