#pragma once

#include <ttrules/extraction.hpp>
#include <ttrules/tabular.hpp>
#include <ttrules/ttnet.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ttrules::test
{

/* binarizer map of n already-binary features named b0..b{n-1} */
inline binarizer_map binary_map( std::size_t n )
{
  std::vector<feature_encoding> features;
  for ( auto i = 0u; i < n; ++i )
  {
    feature_encoding f;
    f.name = "b" + std::to_string( i );
    f.kind = feature_kind::binary;
    features.push_back( f );
  }
  return binarizer_map( std::move( features ) );
}

inline binarized_dataset make_dataset( std::vector<std::vector<std::uint8_t>> const& rows, std::vector<double> targets,
                                       task_type task, binarizer_map map )
{
  binarized_dataset ds;
  ds.n_samples = rows.size();
  ds.total_bits = map.total_bits();
  for ( auto const& r : rows )
    ds.bits.insert( ds.bits.end(), r.begin(), r.end() );
  ds.targets = std::move( targets );
  ds.task = task;
  ds.map = std::move( map );
  return ds;
}

/* random binary features; label = majority of the first `signal` bits,
   flipped with probability `noise` */
inline binarized_dataset random_binary_dataset( std::size_t n_samples, std::size_t n_bits, std::size_t signal, double noise,
                                                std::uint64_t seed, task_type task = {} )
{
  std::mt19937_64 rng( seed );
  binarized_dataset ds;
  ds.n_samples = n_samples;
  ds.total_bits = n_bits;
  ds.task = task;
  ds.map = binary_map( n_bits );
  ds.bits.resize( n_samples * n_bits );
  for ( auto& b : ds.bits )
    b = static_cast<std::uint8_t>( rng() & 1u );
  for ( auto r = 0u; r < n_samples; ++r )
  {
    std::size_t ones = 0;
    for ( auto j = 0u; j < signal; ++j )
      ones += ds.bits[r * n_bits + j];
    double y = 2 * ones > signal ? 1.0 : 0.0;
    if ( static_cast<double>( rng() % 10000 ) / 10000.0 < noise )
      y = 1.0 - y;
    if ( task.kind == task_kind::regression )
      y = static_cast<double>( ones ) + 0.1 * static_cast<double>( rng() % 100 ) / 100.0;
    else if ( task.kind == task_kind::multiclass )
      y = static_cast<double>( std::min<std::size_t>( ones * task.n_classes / ( signal + 1 ), task.n_classes - 1 ) );
    ds.targets.push_back( y );
  }
  return ds;
}

inline std::vector<std::uint8_t> random_bits( std::mt19937_64& rng, std::size_t n )
{
  std::vector<std::uint8_t> v( n );
  for ( auto& b : v )
    b = static_cast<std::uint8_t>( rng() & 1u );
  return v;
}

inline raw_dataset parse_csv( std::string const& text, schema const& s )
{
  std::istringstream in( text );
  return read_csv( in, s );
}

} // namespace ttrules::test

namespace ttrules::test
{

/* Largest relative error between the analytic gradient (surrogate
   activation) and central finite differences over every parameter. */
inline double gradient_check( ttnet_model const& model, binarized_dataset const& data, std::vector<std::size_t> const& rows,
                              training_params const& hp, double eps = 1e-4 )
{
  std::vector<double> analytic;
  loss_and_gradient( model, data, rows, activation_mode::surrogate, hp, &analytic );
  auto params = get_parameters( model );
  auto probe = model;
  double worst = 0.0;
  for ( auto i = 0u; i < params.size(); ++i )
  {
    auto const saved = params[i];
    params[i] = saved + eps;
    set_parameters( probe, params );
    auto const up = loss_and_gradient( probe, data, rows, activation_mode::surrogate, hp, nullptr );
    params[i] = saved - eps;
    set_parameters( probe, params );
    auto const down = loss_and_gradient( probe, data, rows, activation_mode::surrogate, hp, nullptr );
    params[i] = saved;
    auto const numeric = ( up - down ) / ( 2 * eps );
    auto const denom = std::max( { std::abs( analytic[i] ), std::abs( numeric ), 1e-6 } );
    worst = std::max( worst, std::abs( analytic[i] - numeric ) / denom );
  }
  return worst;
}

} // namespace ttrules::test
