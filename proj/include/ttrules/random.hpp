#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace ttrules
{

/* Portable sampling helpers over std::mt19937_64. The distributions in
   <random> are implementation-defined, so everything that has to be
   reproducible across standard libraries goes through these. */
using rng_type = std::mt19937_64;

/* uniform integer in [0, n), rejection sampled */
inline std::uint64_t uniform_index( rng_type& rng, std::uint64_t n )
{
  auto const limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do
  {
    x = rng();
  } while ( x >= limit );
  return x % n;
}

/* uniform real in [lo, hi) */
inline double uniform_real( rng_type& rng, double lo, double hi )
{
  auto const unit = static_cast<double>( rng() >> 11 ) * 0x1.0p-53;
  return lo + ( hi - lo ) * unit;
}

template<typename T>
void shuffle( std::span<T> values, rng_type& rng )
{
  for ( auto i = values.size(); i > 1; --i )
  {
    auto const j = uniform_index( rng, i );
    std::swap( values[i - 1], values[j] );
  }
}

} // namespace ttrules
