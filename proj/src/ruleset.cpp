#include <ttrules/ruleset.hpp>

#include <ttrules/error.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace ttrules
{

double rule_eval( rule const& r, std::span<std::uint8_t const> input )
{
  return r.fires( input ) ? r.weights.at( 0 ) : 0.0;
}

std::vector<double> scores( rule_set const& rs, std::span<std::uint8_t const> input )
{
  std::vector<double> out( rs.bias );
  for ( auto const& r : rs.rules )
  {
    if ( !r.fires( input ) )
      continue;
    for ( auto c = 0u; c < out.size(); ++c )
      out[c] += r.weights[c];
  }
  return out;
}

double predict( rule_set const& rs, std::span<std::uint8_t const> input )
{
  auto const s = scores( rs, input );
  return decide( rs.task, s, rs.standardization );
}

nlohmann::json optimization_report::to_json() const
{
  return { { "initial", initial },
           { "after_constant_folding", after_constant_folding },
           { "after_exact_merge", after_exact_merge },
           { "after_complement_merge", after_complement_merge },
           { "after_correlation_pruning", after_correlation_pruning },
           { "corr_threshold", corr_threshold },
           { "pruned_pairs", pruned_pairs },
           { "train_agreement", train_agreement } };
}

nlohmann::json agreement_report::to_json() const
{
  nlohmann::json j{ { "rows", rows },
                    { "agreeing", agreeing },
                    { "agreement", agreement },
                    { "max_score_difference", max_score_difference },
                    { "zero_rows", zero_rows } };
  if ( first_mismatch )
    j["first_mismatch"] = *first_mismatch;
  return j;
}

namespace
{

/* A function reduced to the variables it depends on, ordered by global
   index. Two formulas compute the same function iff their keys are equal. */
struct function_key
{
  std::vector<std::size_t> support;
  std::vector<std::uint8_t> table;

  friend auto operator<=>( function_key const&, function_key const& ) = default;
};

function_key canonical_key( dnf_formula const& formula )
{
  auto const full = formula_table( formula );
  auto const k = formula.k();
  std::vector<std::pair<std::size_t, std::size_t>> relevant; /* (global, local) */
  for ( auto j = 0u; j < k; ++j )
    for ( std::uint32_t r = 0; r < full.size(); ++r )
      if ( full[r] != full[r ^ ( 1u << j )] )
      {
        relevant.emplace_back( formula.inputs[j], j );
        break;
      }
  std::sort( relevant.begin(), relevant.end() );

  function_key key;
  for ( auto const& [global, _] : relevant )
    key.support.push_back( global );
  key.table.resize( std::size_t{ 1 } << relevant.size() );
  for ( std::uint32_t s = 0; s < key.table.size(); ++s )
  {
    std::uint32_t row = 0;
    for ( auto i = 0u; i < relevant.size(); ++i )
      if ( ( s >> i ) & 1u )
        row |= 1u << relevant[i].second;
    key.table[s] = full[row];
  }
  return key;
}

function_key complement( function_key key )
{
  for ( auto& v : key.table )
    v ^= 1u;
  return key;
}

bool all_zero( std::vector<double> const& weights )
{
  return std::all_of( weights.begin(), weights.end(), []( double w ) { return w == 0.0; } );
}

} // namespace

optimization_result optimize_ruleset( rule_set const& rs, binarized_dataset const& train, double corr_threshold )
{
  if ( !( corr_threshold > 0.0 ) || corr_threshold > 1.0 )
    throw parameter_error( "corr_threshold must be in (0, 1], got " + format_double( corr_threshold ) );
  if ( train.size() == 0 )
    throw value_error( "optimization needs a non-empty training set" );
  if ( train.total_bits != rs.input_bits )
    throw shape_error( "training data width does not match the rule set" );

  optimization_result result;
  auto& out = result.rules;
  auto& report = result.report;
  out = rs;
  report.initial = rs.rules.size();
  report.corr_threshold = corr_threshold;

  std::vector<function_key> keys;
  for ( auto const& r : out.rules )
    keys.push_back( canonical_key( r.formula ) );

  /* 1. constant folding */
  {
    std::vector<rule> kept;
    std::vector<function_key> kept_keys;
    for ( auto i = 0u; i < out.rules.size(); ++i )
    {
      if ( keys[i].support.empty() )
      {
        if ( keys[i].table[0] )
          for ( auto c = 0u; c < out.bias.size(); ++c )
            out.bias[c] += out.rules[i].weights[c];
        continue;
      }
      kept.push_back( std::move( out.rules[i] ) );
      kept_keys.push_back( std::move( keys[i] ) );
    }
    out.rules = std::move( kept );
    keys = std::move( kept_keys );
    report.after_constant_folding = out.rules.size();
  }

  auto drop_zero = [&] {
    std::vector<rule> kept;
    std::vector<function_key> kept_keys;
    for ( auto i = 0u; i < out.rules.size(); ++i )
      if ( !all_zero( out.rules[i].weights ) )
      {
        kept.push_back( std::move( out.rules[i] ) );
        kept_keys.push_back( std::move( keys[i] ) );
      }
    out.rules = std::move( kept );
    keys = std::move( kept_keys );
  };

  /* 2. rules computing the same function: weights add */
  {
    std::map<function_key, std::size_t> first;
    std::vector<rule> kept;
    std::vector<function_key> kept_keys;
    for ( auto i = 0u; i < out.rules.size(); ++i )
    {
      auto const it = first.find( keys[i] );
      if ( it == first.end() )
      {
        first.emplace( keys[i], kept.size() );
        kept.push_back( std::move( out.rules[i] ) );
        kept_keys.push_back( std::move( keys[i] ) );
        continue;
      }
      auto& survivor = kept[it->second];
      for ( auto c = 0u; c < survivor.weights.size(); ++c )
        survivor.weights[c] += out.rules[i].weights[c];
    }
    out.rules = std::move( kept );
    keys = std::move( kept_keys );
    drop_zero();
    report.after_exact_merge = out.rules.size();
  }

  /* 3. g = not f:  a f + b g = (a - b) f + b */
  {
    std::map<function_key, std::size_t> first;
    std::vector<rule> kept;
    std::vector<function_key> kept_keys;
    for ( auto i = 0u; i < out.rules.size(); ++i )
    {
      auto const it = first.find( complement( keys[i] ) );
      if ( it == first.end() )
      {
        first.emplace( keys[i], kept.size() );
        kept.push_back( std::move( out.rules[i] ) );
        kept_keys.push_back( std::move( keys[i] ) );
        continue;
      }
      auto& survivor = kept[it->second];
      for ( auto c = 0u; c < survivor.weights.size(); ++c )
      {
        auto const b = out.rules[i].weights[c];
        survivor.weights[c] -= b;
        out.bias[c] += b;
      }
    }
    out.rules = std::move( kept );
    keys = std::move( kept_keys );
    drop_zero();
    report.after_complement_merge = out.rules.size();
  }

  /* 4. correlation pruning on train firing vectors */
  if ( corr_threshold < 1.0 && out.rules.size() > 1 )
  {
    auto const before = out;
    auto const n = train.size();
    auto const m = out.rules.size();
    std::vector<std::vector<double>> firing( m, std::vector<double>( n ) );
    std::vector<double> mean( m, 0.0 );
    std::vector<double> sd( m, 0.0 );
    for ( auto i = 0u; i < m; ++i )
    {
      for ( auto r = 0u; r < n; ++r )
        firing[i][r] = out.rules[i].fires( train.row( r ) ) ? 1.0 : 0.0;
      for ( auto const v : firing[i] )
        mean[i] += v / static_cast<double>( n );
      for ( auto const v : firing[i] )
        sd[i] += ( v - mean[i] ) * ( v - mean[i] ) / static_cast<double>( n );
      sd[i] = std::sqrt( sd[i] );
    }
    auto magnitude = [&]( std::size_t i ) {
      double s = 0.0;
      for ( auto const w : out.rules[i].weights )
        s += std::abs( w );
      return s;
    };

    std::vector<std::uint8_t> alive( m, 1u );
    for ( auto i = 0u; i < m; ++i )
    {
      for ( auto j = i + 1; j < m && alive[i]; ++j )
      {
        if ( !alive[j] || sd[i] == 0.0 || sd[j] == 0.0 )
          continue;
        double cov = 0.0;
        for ( auto r = 0u; r < n; ++r )
          cov += ( firing[i][r] - mean[i] ) * ( firing[j][r] - mean[j] ) / static_cast<double>( n );
        auto const corr = cov / ( sd[i] * sd[j] );
        if ( std::abs( corr ) < corr_threshold )
          continue;
        auto const survivor = magnitude( j ) > magnitude( i ) ? j : i;
        auto const dropped = survivor == i ? j : i;
        /* least squares of a f_s + b onto w_s f_s + w_d f_d */
        for ( auto c = 0u; c < out.bias.size(); ++c )
        {
          auto const ws = out.rules[survivor].weights[c];
          auto const wd = out.rules[dropped].weights[c];
          double y_mean = 0.0;
          double cov_sy = 0.0;
          for ( auto r = 0u; r < n; ++r )
            y_mean += ( ws * firing[survivor][r] + wd * firing[dropped][r] ) / static_cast<double>( n );
          for ( auto r = 0u; r < n; ++r )
            cov_sy += ( firing[survivor][r] - mean[survivor] ) * ( ws * firing[survivor][r] + wd * firing[dropped][r] - y_mean ) /
                      static_cast<double>( n );
          auto const alpha = cov_sy / ( sd[survivor] * sd[survivor] );
          out.rules[survivor].weights[c] = alpha;
          out.bias[c] += y_mean - alpha * mean[survivor];
        }
        alive[dropped] = 0u;
        ++report.pruned_pairs;
      }
    }
    std::vector<rule> kept;
    for ( auto i = 0u; i < m; ++i )
      if ( alive[i] && !all_zero( out.rules[i].weights ) )
        kept.push_back( std::move( out.rules[i] ) );
    out.rules = std::move( kept );
    if ( report.pruned_pairs > 0 && out.mode == head_mode::ternary )
      out.mode = head_mode::floating;

    std::size_t same = 0;
    for ( auto r = 0u; r < n; ++r )
      same += predict( before, train.row( r ) ) == predict( out, train.row( r ) ) ? 1u : 0u;
    report.train_agreement = static_cast<double>( same ) / static_cast<double>( n );
  }
  report.after_correlation_pruning = out.rules.size();
  out.provenance["optimization"] = report.to_json();
  return result;
}

agreement_report verify_exactness( rule_set const& rs, ttnet_model const& model, binarized_dataset const& data )
{
  if ( rs.input_bits != model.input_bits || data.total_bits != model.input_bits )
    throw shape_error( "rule set, model and data widths differ" );
  if ( rs.task != model.task )
    throw shape_error( "rule set and model tasks differ" );
  agreement_report report;
  report.rows = data.size();
  report.zero_rows = data.size() == 0;
  for ( auto r = 0u; r < data.size(); ++r )
  {
    auto const input = data.row( r );
    auto const rule_scores = scores( rs, input );
    auto const net_scores = forward( model, input );
    for ( auto c = 0u; c < rule_scores.size(); ++c )
      report.max_score_difference = std::max( report.max_score_difference, std::abs( rule_scores[c] - net_scores[c] ) );
    auto const same = decide( rs.task, rule_scores, rs.standardization ) == decide( model.task, net_scores, model.standardization );
    if ( same )
      ++report.agreeing;
    else if ( !report.first_mismatch )
      report.first_mismatch = r;
  }
  report.agreement = report.rows ? static_cast<double>( report.agreeing ) / static_cast<double>( report.rows ) : 1.0;
  return report;
}

namespace
{

std::string format_weight( double w, head_mode mode )
{
  if ( mode == head_mode::ternary && w == std::round( w ) )
    return w > 0 ? "+" + std::to_string( static_cast<long>( w ) ) : std::to_string( static_cast<long>( w ) );
  char buffer[32];
  std::snprintf( buffer, sizeof( buffer ), "%+.6g", w );
  return buffer;
}

} // namespace

std::string to_text( rule const& r, rule_set const& rs )
{
  std::ostringstream os;
  os << '(';
  if ( r.weights.size() == 1 )
    os << format_weight( r.weights[0], rs.mode );
  else
  {
    os << '[';
    for ( auto c = 0u; c < r.weights.size(); ++c )
      os << ( c ? ", " : "" ) << format_weight( r.weights[c], rs.mode );
    os << ']';
  }
  os << ") IF ";

  auto const& names = rs.map.bit_names();
  auto name_of = [&]( std::size_t bit ) { return bit < names.size() ? names[bit] : "bit " + std::to_string( bit ); };
  auto const k = r.formula.k();
  if ( r.formula.cubes.empty() )
    os << "FALSE";
  for ( auto i = 0u; i < r.formula.cubes.size(); ++i )
  {
    auto const& c = r.formula.cubes[i];
    auto const parens = r.formula.cubes.size() > 1 && std::popcount( c.care ) > 1;
    if ( i )
      os << " OR ";
    if ( c.care == 0 )
    {
      os << "TRUE";
      continue;
    }
    if ( parens )
      os << '(';
    bool first = true;
    for ( auto j = 0u; j < k; ++j )
    {
      if ( !( ( c.care >> j ) & 1u ) )
        continue;
      if ( !first )
        os << " AND ";
      first = false;
      if ( ( c.value >> j ) & 1u )
        os << name_of( r.formula.inputs[j] );
      else
        os << "NOT(" << name_of( r.formula.inputs[j] ) << ')';
    }
    if ( parens )
      os << ')';
  }
  return os.str();
}

std::string to_text( rule_set const& rs )
{
  std::string out;
  for ( auto const& r : rs.rules )
    out += to_text( r, rs ) + '\n';
  return out;
}

nlohmann::json to_json( rule_set const& rs )
{
  nlohmann::json j;
  j["format"] = "ttrules-ruleset";
  j["version"] = 1;
  j["task"] = to_string( rs.task.kind );
  j["n_classes"] = rs.task.n_classes;
  j["head_mode"] = to_string( rs.mode );
  j["input_bits"] = rs.input_bits;
  j["bias"] = rs.bias;
  j["standardization"] = { { "mean", rs.standardization.mean }, { "std", rs.standardization.std } };
  j["binarizer"] = rs.map.to_json();
  j["rules"] = nlohmann::json::array();
  auto const& names = rs.map.bit_names();
  for ( auto const& r : rs.rules )
  {
    nlohmann::json jr;
    jr["name"] = r.name;
    jr["source_filter"] = r.source_filter;
    jr["inputs"] = r.formula.inputs;
    auto& bit_names = jr["bit_names"] = nlohmann::json::array();
    for ( auto const b : r.formula.inputs )
      bit_names.push_back( b < names.size() ? names[b] : std::string{} );
    auto& cubes = jr["cubes"] = nlohmann::json::array();
    for ( auto const& c : r.formula.cubes )
      cubes.push_back( to_string( c, r.formula.k() ) );
    jr["weights"] = r.weights;
    j["rules"].push_back( std::move( jr ) );
  }
  j["provenance"] = rs.provenance;
  return j;
}

rule_set ruleset_from_json( nlohmann::json const& j )
{
  rule_set rs;
  try
  {
    if ( j.at( "format" ) != "ttrules-ruleset" || j.at( "version" ) != 1 )
      throw config_error( "not a version-1 ttrules rule set" );
    rs.task.kind = parse_task_kind( j.at( "task" ).get<std::string>() );
    rs.task.n_classes = j.at( "n_classes" ).get<std::size_t>();
    rs.mode = parse_head_mode( j.at( "head_mode" ).get<std::string>() );
    rs.input_bits = j.at( "input_bits" ).get<std::size_t>();
    rs.bias = j.at( "bias" ).get<std::vector<double>>();
    rs.standardization.mean = j.at( "standardization" ).at( "mean" ).get<double>();
    rs.standardization.std = j.at( "standardization" ).at( "std" ).get<double>();
    rs.map = binarizer_map::from_json( j.at( "binarizer" ) );
    for ( auto const& jr : j.at( "rules" ) )
    {
      rule r;
      r.name = jr.at( "name" ).get<std::string>();
      r.source_filter = jr.value( "source_filter", std::size_t{ 0 } );
      r.formula.inputs = jr.at( "inputs" ).get<std::vector<std::size_t>>();
      for ( auto const& c : jr.at( "cubes" ) )
      {
        auto const text = c.get<std::string>();
        if ( text.size() != r.formula.k() )
          throw config_error( "cube '" + text + "' of rule " + r.name + " has the wrong width" );
        r.formula.cubes.push_back( parse_cube( text ) );
      }
      r.weights = jr.at( "weights" ).get<std::vector<double>>();
      if ( r.weights.size() != rs.task.n_outputs() )
        throw config_error( "rule " + r.name + " has the wrong number of weights" );
      for ( auto const b : r.formula.inputs )
        if ( b >= rs.input_bits )
          throw config_error( "rule " + r.name + " reads bit " + std::to_string( b ) + " beyond the input width" );
      rs.rules.push_back( std::move( r ) );
    }
    if ( rs.bias.size() != rs.task.n_outputs() )
      throw config_error( "rule set bias has the wrong width" );
    rs.provenance = j.value( "provenance", nlohmann::json::object() );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw config_error( std::string{ "malformed rule set: " } + e.what() );
  }
  return rs;
}

} // namespace ttrules
