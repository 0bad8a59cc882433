#include <ttrules/logic.hpp>

#include <ttrules/error.hpp>
#include <ttrules/ttnet.hpp>

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace ttrules
{

std::string to_string( cube const& c, std::size_t k )
{
  std::string s( k, '-' );
  for ( auto j = 0u; j < k; ++j )
    if ( ( c.care >> j ) & 1u )
      s[j] = ( ( c.value >> j ) & 1u ) ? '1' : '0';
  return s;
}

cube parse_cube( std::string const& text )
{
  if ( text.size() > 16 )
    throw value_error( "cube '" + text + "' has more than 16 variables" );
  cube c;
  for ( auto j = 0u; j < text.size(); ++j )
  {
    switch ( text[j] )
    {
    case '0': c.care |= 1u << j; break;
    case '1':
      c.care |= 1u << j;
      c.value |= 1u << j;
      break;
    case '-': break;
    default: throw value_error( "bad cube character in '" + text + "'" );
    }
  }
  return c;
}

bool dnf_formula::evaluate_row( std::uint32_t row ) const
{
  return std::any_of( cubes.begin(), cubes.end(), [row]( cube const& c ) { return c.covers( row ); } );
}

bool dnf_formula::evaluate( std::span<std::uint8_t const> input ) const
{
  std::uint32_t row = 0;
  for ( auto j = 0u; j < inputs.size(); ++j )
    if ( input[inputs[j]] )
      row |= 1u << j;
  return evaluate_row( row );
}

dnf_formula minterm_dnf( truth_table const& table )
{
  dnf_formula formula{ table.inputs, {} };
  auto const full = static_cast<std::uint16_t>( ( 1u << table.k() ) - 1u );
  for ( std::uint32_t r = 0; r < table.rows(); ++r )
    if ( table.outputs[r] && !table.dont_care[r] )
      formula.cubes.push_back( { full, static_cast<std::uint16_t>( r ) } );
  return formula;
}

std::vector<std::uint8_t> formula_table( dnf_formula const& formula )
{
  std::vector<std::uint8_t> out( std::size_t{ 1 } << formula.k() );
  for ( std::uint32_t r = 0; r < out.size(); ++r )
    out[r] = formula.evaluate_row( r ) ? 1u : 0u;
  return out;
}

bool agrees( dnf_formula const& formula, truth_table const& table )
{
  if ( formula.k() != table.k() )
    return false;
  for ( std::uint32_t r = 0; r < table.rows(); ++r )
    if ( !table.dont_care[r] && formula.evaluate_row( r ) != static_cast<bool>( table.outputs[r] ) )
      return false;
  return true;
}

namespace
{

void check_table( truth_table const& table )
{
  if ( table.k() > max_fan_in )
    throw parameter_error( "truth table with " + std::to_string( table.k() ) + " inputs exceeds the fan-in bound" );
  auto const rows = std::size_t{ 1 } << table.k();
  if ( table.outputs.size() != rows || table.dont_care.size() != rows )
    throw shape_error( "truth table vectors must have 2^k entries" );
}

std::uint32_t key_of( cube const& c )
{
  return ( static_cast<std::uint32_t>( c.care ) << 16 ) | c.value;
}

/* larger cubes first, then by literal pattern */
bool canonical_less( cube const& a, cube const& b )
{
  auto const pa = std::popcount( a.care );
  auto const pb = std::popcount( b.care );
  if ( pa != pb )
    return pa < pb;
  return a < b;
}

} // namespace

std::vector<cube> prime_implicants( truth_table const& table )
{
  check_table( table );
  auto const k = table.k();
  auto const full = static_cast<std::uint16_t>( ( 1u << k ) - 1u );

  std::vector<cube> current;
  for ( std::uint32_t r = 0; r < table.rows(); ++r )
    if ( table.outputs[r] || table.dont_care[r] )
      current.push_back( { full, static_cast<std::uint16_t>( r ) } );

  std::vector<cube> primes;
  while ( !current.empty() )
  {
    std::unordered_set<std::uint32_t> present;
    for ( auto const& c : current )
      present.insert( key_of( c ) );
    std::unordered_set<std::uint32_t> combined;
    std::unordered_set<std::uint32_t> next_keys;
    std::vector<cube> next;
    for ( auto const& c : current )
    {
      for ( auto j = 0u; j < k; ++j )
      {
        auto const bit = static_cast<std::uint16_t>( 1u << j );
        if ( !( c.care & bit ) )
          continue;
        cube const partner{ c.care, static_cast<std::uint16_t>( c.value ^ bit ) };
        if ( !present.contains( key_of( partner ) ) )
          continue;
        combined.insert( key_of( c ) );
        cube const merged{ static_cast<std::uint16_t>( c.care & ~bit ), static_cast<std::uint16_t>( c.value & ~bit ) };
        if ( next_keys.insert( key_of( merged ) ).second )
          next.push_back( merged );
      }
    }
    for ( auto const& c : current )
      if ( !combined.contains( key_of( c ) ) )
        primes.push_back( c );
    current = std::move( next );
  }
  std::sort( primes.begin(), primes.end(), canonical_less );
  return primes;
}

dnf_formula minimize_qm( truth_table const& table )
{
  check_table( table );
  dnf_formula formula{ table.inputs, {} };

  std::vector<std::uint32_t> on_rows;
  for ( std::uint32_t r = 0; r < table.rows(); ++r )
    if ( table.outputs[r] && !table.dont_care[r] )
      on_rows.push_back( r );
  if ( on_rows.empty() )
    return formula;

  auto primes = prime_implicants( table );
  /* primes covering only don't-care rows never enter the cover */
  std::erase_if( primes, [&]( cube const& p ) {
    return std::none_of( on_rows.begin(), on_rows.end(), [&]( auto r ) { return p.covers( r ); } );
  } );

  std::vector<std::vector<std::size_t>> covering( on_rows.size() ); /* on-row -> primes */
  for ( auto i = 0u; i < on_rows.size(); ++i )
    for ( auto p = 0u; p < primes.size(); ++p )
      if ( primes[p].covers( on_rows[i] ) )
        covering[i].push_back( p );

  std::vector<std::uint8_t> selected( primes.size(), 0u );
  std::vector<std::uint8_t> covered( on_rows.size(), 0u );
  auto select = [&]( std::size_t p ) {
    selected[p] = 1u;
    for ( auto i = 0u; i < on_rows.size(); ++i )
      if ( primes[p].covers( on_rows[i] ) )
        covered[i] = 1u;
  };

  for ( auto i = 0u; i < on_rows.size(); ++i )
    if ( covering[i].size() == 1u && !selected[covering[i][0]] )
      select( covering[i][0] );

  while ( std::find( covered.begin(), covered.end(), std::uint8_t{ 0 } ) != covered.end() )
  {
    std::size_t best = primes.size();
    std::size_t best_count = 0;
    std::uint32_t best_row = 0;
    for ( auto p = 0u; p < primes.size(); ++p )
    {
      if ( selected[p] )
        continue;
      std::size_t count = 0;
      std::uint32_t first_row = 0;
      for ( auto i = 0u; i < on_rows.size(); ++i )
        if ( !covered[i] && primes[p].covers( on_rows[i] ) )
        {
          if ( count == 0 )
            first_row = on_rows[i];
          ++count;
        }
      if ( count == 0 )
        continue;
      if ( count > best_count || ( count == best_count && first_row < best_row ) )
      {
        best = p;
        best_count = count;
        best_row = first_row;
      }
    }
    if ( best == primes.size() )
      throw extraction_error( "prime implicants do not cover the on-set" );
    select( best );
  }

  for ( auto p = 0u; p < primes.size(); ++p )
    if ( selected[p] )
      formula.cubes.push_back( primes[p] );
  return formula;
}

} // namespace ttrules
