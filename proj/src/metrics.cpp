#include <ttrules/metrics.hpp>

#include <ttrules/error.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace ttrules
{

namespace
{

void check_lengths( std::size_t a, std::size_t b )
{
  if ( a != b )
    throw metric_error( "length mismatch: " + std::to_string( a ) + " predictions vs " + std::to_string( b ) + " labels" );
  if ( a == 0 )
    throw metric_error( "metric over zero samples" );
}

} // namespace

double auc( std::span<double const> scores, std::span<double const> labels )
{
  check_lengths( scores.size(), labels.size() );
  std::vector<std::size_t> order( scores.size() );
  std::iota( order.begin(), order.end(), std::size_t{ 0 } );
  std::sort( order.begin(), order.end(), [&]( auto a, auto b ) { return scores[a] < scores[b]; } );

  /* walk groups of tied scores; every positive beats all negatives seen in
     earlier groups and ties with half of the negatives in its own group */
  double concordant = 0.0;
  double negatives_below = 0.0;
  double positives = 0.0;
  double negatives = 0.0;
  for ( std::size_t i = 0; i < order.size(); )
  {
    auto j = i;
    double group_pos = 0.0;
    double group_neg = 0.0;
    while ( j < order.size() && scores[order[j]] == scores[order[i]] )
    {
      auto const y = labels[order[j]];
      if ( y != 0.0 && y != 1.0 )
        throw metric_error( "auc needs 0/1 labels" );
      ( y == 1.0 ? group_pos : group_neg ) += 1.0;
      ++j;
    }
    concordant += group_pos * ( negatives_below + 0.5 * group_neg );
    negatives_below += group_neg;
    positives += group_pos;
    negatives += group_neg;
    i = j;
  }
  if ( positives == 0.0 || negatives == 0.0 )
    throw metric_error( "auc needs both classes present" );
  return concordant / ( positives * negatives );
}

double accuracy( std::span<double const> predictions, std::span<double const> labels )
{
  check_lengths( predictions.size(), labels.size() );
  std::size_t correct = 0;
  for ( auto i = 0u; i < predictions.size(); ++i )
    correct += predictions[i] == labels[i] ? 1u : 0u;
  return static_cast<double>( correct ) / static_cast<double>( predictions.size() );
}

double rmse( std::span<double const> predictions, std::span<double const> targets )
{
  check_lengths( predictions.size(), targets.size() );
  double sum = 0.0;
  for ( auto i = 0u; i < predictions.size(); ++i )
  {
    auto const d = predictions[i] - targets[i];
    sum += d * d;
  }
  return std::sqrt( sum / static_cast<double>( predictions.size() ) );
}

} // namespace ttrules
