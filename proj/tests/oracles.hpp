#pragma once

/* Brute-force reference computations. They deliberately share no code
   with the library routines they check. */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

namespace ttrules::oracle
{

/* O(n^2) pair count with ties = 1/2 */
inline double auc_pairs( std::vector<double> const& scores, std::vector<double> const& labels )
{
  double num = 0.0;
  double den = 0.0;
  for ( auto i = 0u; i < scores.size(); ++i )
    for ( auto j = 0u; j < scores.size(); ++j )
    {
      if ( labels[i] != 1.0 || labels[j] != 0.0 )
        continue;
      den += 1.0;
      num += scores[i] > scores[j] ? 1.0 : ( scores[i] == scores[j] ? 0.5 : 0.0 );
    }
  return num / den;
}

/* ROBDD size under the order x0 < x1 < ... : at level i, one node per
   distinct subfunction (after fixing x0..x{i-1}) that depends on x_i */
inline std::size_t robdd_size( std::vector<std::uint8_t> const& table, std::size_t n )
{
  std::size_t total = 0;
  for ( std::size_t level = 0; level < n; ++level )
  {
    std::set<std::vector<std::uint8_t>> distinct;
    for ( std::uint32_t prefix = 0; prefix < ( 1u << level ); ++prefix )
    {
      std::vector<std::uint8_t> sub;
      for ( std::uint32_t rest = 0; rest < ( 1u << ( n - level ) ); ++rest )
        sub.push_back( table[prefix | ( rest << level )] );
      /* depends on x_level: halves for x_level = 0 / 1 differ */
      bool depends = false;
      for ( std::uint32_t rest = 0; rest < sub.size(); rest += 2 )
        depends = depends || sub[rest] != sub[rest + 1];
      if ( depends )
        distinct.insert( sub );
    }
    total += distinct.size();
  }
  return total;
}

/* smallest number of cubes over 2 variables whose OR equals `on` exactly */
inline std::size_t min_dnf_cubes_k2( std::vector<std::uint8_t> const& on )
{
  /* all 9 cubes over 2 variables as row masks */
  std::vector<std::uint32_t> cubes;
  for ( int a = 0; a < 3; ++a )
    for ( int b = 0; b < 3; ++b )
    {
      std::uint32_t mask = 0;
      for ( std::uint32_t r = 0; r < 4; ++r )
      {
        bool const x0 = r & 1u;
        bool const x1 = r & 2u;
        if ( ( a == 2 || x0 == ( a == 1 ) ) && ( b == 2 || x1 == ( b == 1 ) ) )
          mask |= 1u << r;
      }
      cubes.push_back( mask );
    }
  std::uint32_t target = 0;
  for ( std::uint32_t r = 0; r < 4; ++r )
    if ( on[r] )
      target |= 1u << r;
  std::size_t best = 99;
  for ( std::uint32_t subset = 0; subset < ( 1u << cubes.size() ); ++subset )
  {
    std::uint32_t cover = 0;
    std::size_t count = 0;
    for ( auto i = 0u; i < cubes.size(); ++i )
      if ( ( subset >> i ) & 1u )
      {
        cover |= cubes[i];
        ++count;
      }
    if ( cover == target )
      best = std::min( best, count );
  }
  return best;
}

} // namespace ttrules::oracle
