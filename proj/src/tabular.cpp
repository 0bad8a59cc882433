#include <ttrules/tabular.hpp>

#include <ttrules/error.hpp>
#include <ttrules/random.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ttrules
{

std::string to_string( task_kind kind )
{
  switch ( kind )
  {
  case task_kind::binary: return "binary";
  case task_kind::multiclass: return "multiclass";
  case task_kind::regression: return "regression";
  }
  return "?";
}

task_kind parse_task_kind( std::string const& text )
{
  if ( text == "binary" )
    return task_kind::binary;
  if ( text == "multiclass" )
    return task_kind::multiclass;
  if ( text == "regression" )
    return task_kind::regression;
  throw config_error( "unknown task kind '" + text + "'" );
}

std::string to_string( feature_kind kind )
{
  switch ( kind )
  {
  case feature_kind::continuous: return "continuous";
  case feature_kind::categorical: return "categorical";
  case feature_kind::binary: return "binary";
  }
  return "?";
}

feature_kind parse_feature_kind( std::string const& text )
{
  if ( text == "continuous" )
    return feature_kind::continuous;
  if ( text == "categorical" )
    return feature_kind::categorical;
  if ( text == "binary" || text == "already-binary" )
    return feature_kind::binary;
  throw config_error( "unknown feature kind '" + text + "'" );
}

std::string format_double( double value )
{
  char buffer[64];
  auto const [end, ec] = std::to_chars( buffer, buffer + sizeof( buffer ), value );
  if ( ec != std::errc{} )
    throw value_error( "cannot format number" );
  return std::string( buffer, end );
}

double parse_double( std::string const& text )
{
  double value = 0.0;
  auto const* first = text.data();
  auto const* last = text.data() + text.size();
  while ( first != last && ( *first == ' ' || *first == '\t' ) )
    ++first;
  while ( last != first && ( last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r' ) )
    --last;
  if ( first != last && *first == '+' )
    ++first;
  auto const [end, ec] = std::from_chars( first, last, value );
  if ( ec != std::errc{} || end != last || first == last || !std::isfinite( value ) )
    throw parse_error( "not a number: '" + text + "'" );
  return value;
}

/* schema ---------------------------------------------------------------- */

void validate( schema const& s )
{
  std::set<std::string> names;
  for ( auto const& f : s.features )
  {
    if ( f.name.empty() )
      throw schema_error( "feature with empty name" );
    if ( !names.insert( f.name ).second )
      throw schema_error( "duplicate feature name '" + f.name + "'" );
    if ( f.name == s.target )
      throw schema_error( "feature '" + f.name + "' is also the target" );
    if ( f.kind == feature_kind::continuous && f.n_thresholds < 1 )
      throw schema_error( "feature '" + f.name + "' needs n_thresholds >= 1" );
    if ( f.kind == feature_kind::categorical )
    {
      std::set<std::string> const distinct( f.categories.begin(), f.categories.end() );
      if ( distinct.size() != f.categories.size() || distinct.size() < 2 )
        throw schema_error( "feature '" + f.name + "' needs at least 2 distinct categories" );
    }
  }
  if ( s.target.empty() )
    throw schema_error( "schema has no target column" );
  if ( s.task.kind == task_kind::binary && s.task.n_classes != 2 )
    throw schema_error( "binary task must have 2 classes" );
}

schema schema_from_json( nlohmann::json const& j )
{
  static std::set<std::string> const top_keys{ "target", "task", "n_classes", "features" };
  static std::set<std::string> const feature_keys{ "name", "kind", "categories", "n_thresholds" };
  if ( !j.is_object() )
    throw config_error( "schema must be a JSON object" );
  for ( auto const& [key, _] : j.items() )
    if ( !top_keys.contains( key ) )
      throw config_error( "unknown schema key '" + key + "'" );

  schema s;
  try
  {
    s.target = j.at( "target" ).get<std::string>();
    s.task.kind = parse_task_kind( j.value( "task", std::string{ "binary" } ) );
    s.task.n_classes = s.task.kind == task_kind::regression ? 0u : j.value( "n_classes", std::size_t{ s.task.kind == task_kind::binary ? 2u : 0u } );
    for ( auto const& jf : j.at( "features" ) )
    {
      for ( auto const& [key, _] : jf.items() )
        if ( !feature_keys.contains( key ) )
          throw config_error( "unknown feature key '" + key + "'" );
      feature_spec f;
      f.name = jf.at( "name" ).get<std::string>();
      f.kind = parse_feature_kind( jf.value( "kind", std::string{ "continuous" } ) );
      f.n_thresholds = jf.value( "n_thresholds", std::size_t{ 8 } );
      if ( jf.contains( "categories" ) )
        f.categories = jf.at( "categories" ).get<std::vector<std::string>>();
      s.features.push_back( std::move( f ) );
    }
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw config_error( std::string{ "malformed schema: " } + e.what() );
  }
  validate( s );
  return s;
}

nlohmann::json to_json( schema const& s )
{
  nlohmann::json j;
  j["target"] = s.target;
  j["task"] = to_string( s.task.kind );
  if ( s.task.kind == task_kind::multiclass )
    j["n_classes"] = s.task.n_classes;
  j["features"] = nlohmann::json::array();
  for ( auto const& f : s.features )
  {
    nlohmann::json jf{ { "name", f.name }, { "kind", to_string( f.kind ) } };
    if ( f.kind == feature_kind::continuous )
      jf["n_thresholds"] = f.n_thresholds;
    if ( f.kind == feature_kind::categorical )
      jf["categories"] = f.categories;
    j["features"].push_back( std::move( jf ) );
  }
  return j;
}

schema load_schema( std::filesystem::path const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw config_error( "cannot open schema file " + path.string() );
  nlohmann::json j;
  try
  {
    in >> j;
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw config_error( "schema file " + path.string() + " is not valid JSON: " + e.what() );
  }
  return schema_from_json( j );
}

/* CSV ------------------------------------------------------------------- */

namespace
{

/* RFC-4180 record reader; returns false at end of input */
bool read_record( std::istream& in, std::vector<std::string>& fields, std::size_t& line )
{
  fields.clear();
  if ( in.peek() == std::char_traits<char>::eof() )
    return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while ( in.get( c ) )
  {
    any = true;
    if ( quoted )
    {
      if ( c == '"' )
      {
        if ( in.peek() == '"' )
        {
          in.get( c );
          field.push_back( '"' );
        }
        else
          quoted = false;
      }
      else
      {
        if ( c == '\n' )
          ++line;
        field.push_back( c );
      }
      continue;
    }
    if ( c == '"' )
      quoted = true;
    else if ( c == ',' )
      fields.push_back( std::exchange( field, {} ) );
    else if ( c == '\r' )
      continue;
    else if ( c == '\n' )
    {
      ++line;
      break;
    }
    else
      field.push_back( c );
  }
  if ( quoted )
    throw parse_error( "unterminated quoted field at line " + std::to_string( line ) );
  fields.push_back( std::move( field ) );
  return any;
}

bool is_missing( std::string const& cell )
{
  auto const first = cell.find_first_not_of( " \t" );
  if ( first == std::string::npos )
    return true;
  auto const trimmed = cell.substr( first, cell.find_last_not_of( " \t" ) - first + 1 );
  return trimmed == "?" || trimmed == "NA" || trimmed == "NaN" || trimmed == "nan";
}

std::string trim( std::string const& s )
{
  auto const first = s.find_first_not_of( " \t" );
  if ( first == std::string::npos )
    return {};
  return s.substr( first, s.find_last_not_of( " \t" ) - first + 1 );
}

} // namespace

raw_dataset read_csv( std::istream& in, schema const& s, std::string const& source )
{
  validate( s );
  std::size_t line = 1;
  std::vector<std::string> header;
  if ( !read_record( in, header, line ) )
    throw parse_error( source + ": empty file" );
  for ( auto& h : header )
    h = trim( h );
  if ( !header.empty() && header[0].starts_with( "\xEF\xBB\xBF" ) )
    header[0].erase( 0, 3 );

  auto column_of = [&]( std::string const& name ) {
    auto const it = std::find( header.begin(), header.end(), name );
    if ( it == header.end() )
      throw schema_error( source + ": missing column '" + name + "'" );
    return static_cast<std::size_t>( it - header.begin() );
  };

  std::vector<std::size_t> feature_columns;
  for ( auto const& f : s.features )
    feature_columns.push_back( column_of( f.name ) );
  auto const target_column = column_of( s.target );

  raw_dataset raw;
  raw.spec = s;
  raw.columns.resize( s.features.size() );
  std::vector<std::string> target_text;

  std::vector<std::string> fields;
  std::size_t row = 0;
  while ( true )
  {
    auto const record_line = line;
    if ( !read_record( in, fields, line ) )
      break;
    if ( fields.size() == 1 && trim( fields[0] ).empty() )
      continue; /* blank line */
    ++row;
    if ( fields.size() != header.size() )
      throw parse_error( source + ": row " + std::to_string( row ) + " (line " + std::to_string( record_line ) + ") has " +
                         std::to_string( fields.size() ) + " fields, header has " + std::to_string( header.size() ) );
    auto const where = [&]( std::string const& column ) {
      return source + ": row " + std::to_string( row ) + ", column '" + column + "'";
    };

    for ( auto i = 0u; i < s.features.size(); ++i )
    {
      auto const& f = s.features[i];
      auto const& cell = fields[feature_columns[i]];
      if ( is_missing( cell ) )
        throw parse_error( where( f.name ) + ": missing value" );
      switch ( f.kind )
      {
      case feature_kind::continuous:
      case feature_kind::binary:
      {
        double value;
        try
        {
          value = parse_double( cell );
        }
        catch ( parse_error const& )
        {
          throw parse_error( where( f.name ) + ": cannot parse '" + cell + "' as a number" );
        }
        if ( f.kind == feature_kind::binary && value != 0.0 && value != 1.0 )
          throw value_error( where( f.name ) + ": binary feature has value '" + cell + "'" );
        raw.columns[i].numeric.push_back( value );
        break;
      }
      case feature_kind::categorical:
      {
        auto const label = trim( cell );
        if ( std::find( f.categories.begin(), f.categories.end(), label ) == f.categories.end() )
          throw value_error( where( f.name ) + ": unseen category '" + label + "'" );
        raw.columns[i].labels.push_back( label );
        break;
      }
      }
    }

    auto const& target_cell = fields[target_column];
    if ( is_missing( target_cell ) )
      throw parse_error( where( s.target ) + ": missing target" );
    target_text.push_back( trim( target_cell ) );
  }

  raw.spec.task = s.task;
  if ( s.task.kind == task_kind::regression )
  {
    for ( auto r = 0u; r < target_text.size(); ++r )
    {
      try
      {
        raw.targets.push_back( parse_double( target_text[r] ) );
      }
      catch ( parse_error const& )
      {
        throw parse_error( source + ": row " + std::to_string( r + 1 ) + ", column '" + s.target + "': cannot parse '" +
                           target_text[r] + "' as a number" );
      }
    }
    return raw;
  }

  /* class names: numeric order when every label is a number */
  std::vector<std::string> names( target_text.begin(), target_text.end() );
  std::sort( names.begin(), names.end() );
  names.erase( std::unique( names.begin(), names.end() ), names.end() );
  bool const numeric = std::all_of( names.begin(), names.end(), []( auto const& n ) {
    try
    {
      parse_double( n );
      return true;
    }
    catch ( parse_error const& )
    {
      return false;
    }
  } );
  if ( numeric )
    std::stable_sort( names.begin(), names.end(), []( auto const& a, auto const& b ) { return parse_double( a ) < parse_double( b ); } );

  if ( s.task.kind == task_kind::binary && names.size() != 2 )
    throw value_error( source + ": binary target '" + s.target + "' has " + std::to_string( names.size() ) + " distinct values" );
  if ( s.task.kind == task_kind::multiclass )
  {
    if ( s.task.n_classes != 0 && names.size() != s.task.n_classes )
      throw value_error( source + ": target '" + s.target + "' has " + std::to_string( names.size() ) + " classes, schema declares " +
                         std::to_string( s.task.n_classes ) );
    if ( names.size() < 2 )
      throw value_error( source + ": target '" + s.target + "' has fewer than 2 classes" );
    raw.spec.task.n_classes = names.size();
  }

  std::unordered_map<std::string, double> index;
  for ( auto i = 0u; i < names.size(); ++i )
    index.emplace( names[i], static_cast<double>( i ) );
  for ( auto const& t : target_text )
    raw.targets.push_back( index.at( t ) );
  raw.class_names = std::move( names );
  return raw;
}

raw_dataset load_csv( std::filesystem::path const& path, schema const& s )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw schema_error( "cannot open data file " + path.string() );
  return read_csv( in, s, path.string() );
}

raw_dataset subset( raw_dataset const& raw, std::span<std::size_t const> rows )
{
  raw_dataset out;
  out.spec = raw.spec;
  out.class_names = raw.class_names;
  out.columns.resize( raw.columns.size() );
  for ( auto const r : rows )
  {
    for ( auto i = 0u; i < raw.columns.size(); ++i )
    {
      if ( !raw.columns[i].numeric.empty() )
        out.columns[i].numeric.push_back( raw.columns[i].numeric.at( r ) );
      else if ( !raw.columns[i].labels.empty() )
        out.columns[i].labels.push_back( raw.columns[i].labels.at( r ) );
    }
    out.targets.push_back( raw.targets.at( r ) );
  }
  return out;
}

/* binarizer ------------------------------------------------------------- */

binarizer_map::binarizer_map( std::vector<feature_encoding> features, std::vector<std::string> warnings )
    : features_( std::move( features ) ), warnings_( std::move( warnings ) )
{
  std::size_t next = 0;
  for ( auto i = 0u; i < features_.size(); ++i )
  {
    auto& f = features_[i];
    f.first_bit = next;
    switch ( f.kind )
    {
    case feature_kind::continuous:
      for ( auto j = 1u; j < f.thresholds.size(); ++j )
        if ( !( f.thresholds[j - 1] < f.thresholds[j] ) )
          throw value_error( "thresholds of '" + f.name + "' are not strictly ascending" );
      f.width = f.thresholds.size();
      for ( auto j = 0u; j < f.width; ++j )
      {
        origins_.push_back( { i, f.kind, j } );
        names_.push_back( f.name + " ≥ " + format_double( f.thresholds[j] ) );
      }
      break;
    case feature_kind::categorical:
      f.width = f.categories.size();
      for ( auto j = 0u; j < f.width; ++j )
      {
        origins_.push_back( { i, f.kind, j } );
        names_.push_back( f.name + " = " + f.categories[j] );
      }
      break;
    case feature_kind::binary:
      f.width = 1;
      origins_.push_back( { i, f.kind, 0 } );
      names_.push_back( f.name );
      break;
    }
    next += f.width;
  }
}

nlohmann::json binarizer_map::to_json() const
{
  nlohmann::json j;
  j["total_bits"] = total_bits();
  j["features"] = nlohmann::json::array();
  for ( auto const& f : features_ )
  {
    nlohmann::json jf{ { "name", f.name }, { "kind", ttrules::to_string( f.kind ) } };
    if ( f.kind == feature_kind::continuous )
    {
      auto& thresholds = jf["thresholds"] = nlohmann::json::array();
      for ( auto const t : f.thresholds )
        thresholds.push_back( format_double( t ) );
    }
    if ( f.kind == feature_kind::categorical )
      jf["categories"] = f.categories;
    j["features"].push_back( std::move( jf ) );
  }
  j["bit_names"] = names_;
  j["warnings"] = warnings_;
  return j;
}

binarizer_map binarizer_map::from_json( nlohmann::json const& j )
{
  std::vector<feature_encoding> features;
  try
  {
    for ( auto const& jf : j.at( "features" ) )
    {
      feature_encoding f;
      f.name = jf.at( "name" ).get<std::string>();
      f.kind = parse_feature_kind( jf.at( "kind" ).get<std::string>() );
      if ( f.kind == feature_kind::continuous )
        for ( auto const& t : jf.at( "thresholds" ) )
          f.thresholds.push_back( parse_double( t.get<std::string>() ) );
      if ( f.kind == feature_kind::categorical )
        f.categories = jf.at( "categories" ).get<std::vector<std::string>>();
      features.push_back( std::move( f ) );
    }
    binarizer_map map( std::move( features ), j.value( "warnings", std::vector<std::string>{} ) );
    if ( j.contains( "total_bits" ) && j.at( "total_bits" ).get<std::size_t>() != map.total_bits() )
      throw value_error( "binarizer total_bits does not match its features" );
    return map;
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw config_error( std::string{ "malformed binarizer map: " } + e.what() );
  }
}

double midpoint_quantile( std::span<double const> sorted, double q )
{
  if ( sorted.empty() )
    throw value_error( "quantile of an empty column" );
  auto const h = q * static_cast<double>( sorted.size() - 1 );
  auto const lo = static_cast<std::size_t>( std::floor( h ) );
  auto const hi = static_cast<std::size_t>( std::ceil( h ) );
  return 0.5 * ( sorted[lo] + sorted[hi] );
}

binarizer_map fit_binarizer( raw_dataset const& raw )
{
  if ( raw.size() == 0 )
    throw value_error( "cannot fit a binarizer on an empty dataset" );
  std::vector<feature_encoding> features;
  std::vector<std::string> warnings;
  for ( auto i = 0u; i < raw.spec.features.size(); ++i )
  {
    auto const& spec = raw.spec.features[i];
    feature_encoding f;
    f.name = spec.name;
    f.kind = spec.kind;
    switch ( spec.kind )
    {
    case feature_kind::continuous:
    {
      auto sorted = raw.columns[i].numeric;
      std::sort( sorted.begin(), sorted.end() );
      if ( sorted.front() == sorted.back() )
      {
        warnings.push_back( "feature '" + spec.name + "' is constant; it contributes no bits" );
        break;
      }
      auto const m = spec.n_thresholds;
      for ( auto j = 1u; j <= m; ++j )
      {
        auto const t = midpoint_quantile( sorted, static_cast<double>( j ) / static_cast<double>( m + 1 ) );
        /* a threshold at the minimum yields a bit that is constant on the fitted rows */
        if ( t <= sorted.front() )
          continue;
        if ( f.thresholds.empty() || f.thresholds.back() < t )
          f.thresholds.push_back( t );
      }
      if ( f.thresholds.empty() )
        warnings.push_back( "feature '" + spec.name + "' has no usable thresholds" );
      break;
    }
    case feature_kind::categorical:
    {
      std::set<std::string> const seen( raw.columns[i].labels.begin(), raw.columns[i].labels.end() );
      for ( auto const& c : spec.categories )
        if ( seen.contains( c ) )
          f.categories.push_back( c );
      break;
    }
    case feature_kind::binary:
      break;
    }
    features.push_back( std::move( f ) );
  }
  return binarizer_map( std::move( features ), std::move( warnings ) );
}

binarized_dataset binarize( raw_dataset const& raw, binarizer_map const& map )
{
  auto const& features = map.features();
  if ( features.size() != raw.spec.features.size() )
    throw schema_error( "binarizer map has " + std::to_string( features.size() ) + " features, dataset has " +
                        std::to_string( raw.spec.features.size() ) );
  for ( auto i = 0u; i < features.size(); ++i )
    if ( features[i].name != raw.spec.features[i].name || features[i].kind != raw.spec.features[i].kind )
      throw schema_error( "binarizer map feature '" + features[i].name + "' does not match dataset feature '" +
                          raw.spec.features[i].name + "'" );

  binarized_dataset ds;
  ds.n_samples = raw.size();
  ds.total_bits = map.total_bits();
  ds.bits.assign( ds.n_samples * ds.total_bits, 0u );
  ds.targets = raw.targets;
  ds.task = raw.spec.task;
  ds.map = map;

  for ( auto i = 0u; i < features.size(); ++i )
  {
    auto const& f = features[i];
    for ( auto r = 0u; r < ds.n_samples; ++r )
    {
      auto* out = ds.bits.data() + r * ds.total_bits + f.first_bit;
      switch ( f.kind )
      {
      case feature_kind::continuous:
      {
        auto const x = raw.columns[i].numeric[r];
        for ( auto j = 0u; j < f.thresholds.size(); ++j )
          out[j] = x >= f.thresholds[j] ? 1u : 0u;
        break;
      }
      case feature_kind::categorical:
      {
        auto const& label = raw.columns[i].labels[r];
        auto const it = std::find( f.categories.begin(), f.categories.end(), label );
        if ( it == f.categories.end() )
          throw value_error( "feature '" + f.name + "': unseen category '" + label + "'" );
        out[it - f.categories.begin()] = 1u;
        break;
      }
      case feature_kind::binary:
        out[0] = raw.columns[i].numeric[r] != 0.0 ? 1u : 0u;
        break;
      }
    }
  }
  return ds;
}

binarized_dataset subset( binarized_dataset const& ds, std::span<std::size_t const> rows )
{
  binarized_dataset out;
  out.n_samples = rows.size();
  out.total_bits = ds.total_bits;
  out.task = ds.task;
  out.map = ds.map;
  out.bits.reserve( rows.size() * ds.total_bits );
  for ( auto const r : rows )
  {
    auto const src = ds.row( r );
    out.bits.insert( out.bits.end(), src.begin(), src.end() );
    out.targets.push_back( ds.targets.at( r ) );
  }
  return out;
}

std::string check_invariants( binarized_dataset const& ds )
{
  if ( ds.map.total_bits() != ds.total_bits )
    return "map width differs from bit matrix width";
  for ( auto r = 0u; r < ds.n_samples; ++r )
  {
    auto const row = ds.row( r );
    for ( auto const& f : ds.map.features() )
    {
      auto const bits = row.subspan( f.first_bit, f.width );
      if ( f.kind == feature_kind::continuous )
      {
        for ( auto j = 1u; j < bits.size(); ++j )
          if ( bits[j] && !bits[j - 1] )
            return "row " + std::to_string( r ) + ": thermometer code of '" + f.name + "' is not monotone";
      }
      else if ( f.kind == feature_kind::categorical )
      {
        if ( std::count( bits.begin(), bits.end(), std::uint8_t{ 1 } ) != 1 )
          return "row " + std::to_string( r ) + ": one-hot group '" + f.name + "' does not have exactly one bit set";
      }
    }
    if ( ds.task.is_classification() )
    {
      auto const y = ds.targets[r];
      if ( y < 0 || y >= static_cast<double>( ds.task.n_classes ) || y != std::floor( y ) )
        return "row " + std::to_string( r ) + ": class label out of range";
    }
  }
  return {};
}

/* folds ----------------------------------------------------------------- */

std::vector<fold> kfold_split( std::span<double const> targets, task_type const& task, std::size_t k, std::uint64_t seed )
{
  if ( k < 2 )
    throw parameter_error( "k-fold split needs k >= 2" );
  if ( targets.size() < k )
    throw stratification_error( "cannot split " + std::to_string( targets.size() ) + " samples into " + std::to_string( k ) + " folds" );

  rng_type rng( seed );
  std::vector<std::size_t> order;
  if ( task.is_classification() )
  {
    std::map<long, std::vector<std::size_t>> by_class;
    for ( auto i = 0u; i < targets.size(); ++i )
      by_class[static_cast<long>( targets[i] )].push_back( i );
    for ( auto& [label, members] : by_class )
    {
      if ( members.size() < k )
        throw stratification_error( "class " + std::to_string( label ) + " has " + std::to_string( members.size() ) +
                                    " members, fewer than k = " + std::to_string( k ) );
      shuffle( std::span{ members }, rng );
      order.insert( order.end(), members.begin(), members.end() );
    }
  }
  else
  {
    order.resize( targets.size() );
    std::iota( order.begin(), order.end(), std::size_t{ 0 } );
    shuffle( std::span{ order }, rng );
  }

  /* dealing the class-grouped order round-robin keeps both per-class and
     total fold sizes within one of each other */
  std::vector<std::vector<std::size_t>> tests( k );
  for ( auto p = 0u; p < order.size(); ++p )
    tests[p % k].push_back( order[p] );

  std::vector<fold> folds( k );
  for ( auto f = 0u; f < k; ++f )
  {
    std::sort( tests[f].begin(), tests[f].end() );
    folds[f].test = tests[f];
    for ( auto g = 0u; g < k; ++g )
      if ( g != f )
        folds[f].train.insert( folds[f].train.end(), tests[g].begin(), tests[g].end() );
    std::sort( folds[f].train.begin(), folds[f].train.end() );
  }
  return folds;
}

std::vector<fold> kfold_split( binarized_dataset const& ds, std::size_t k, std::uint64_t seed )
{
  return kfold_split( ds.targets, ds.task, k, seed );
}

} // namespace ttrules
