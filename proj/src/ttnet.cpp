#include <ttrules/ttnet.hpp>

#include <ttrules/error.hpp>
#include <ttrules/metrics.hpp>
#include <ttrules/random.hpp>
#include <ttrules/util.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace ttrules
{

std::string to_string( head_mode mode )
{
  return mode == head_mode::ternary ? "ternary" : "float";
}

head_mode parse_head_mode( std::string const& text )
{
  if ( text == "float" )
    return head_mode::floating;
  if ( text == "ternary" )
    return head_mode::ternary;
  throw config_error( "unknown head mode '" + text + "'" );
}

void validate( ttnet_model const& model )
{
  if ( model.filters.empty() )
    throw value_error( "model has no filters" );
  for ( auto f = 0u; f < model.filters.size(); ++f )
  {
    auto const& filter = model.filters[f];
    auto const k = filter.fan_in();
    auto const h = filter.hidden_width;
    if ( k < 1 || k > max_fan_in )
      throw value_error( "filter " + std::to_string( f ) + " has fan-in " + std::to_string( k ) );
    std::set<std::size_t> const distinct( filter.inputs.begin(), filter.inputs.end() );
    if ( distinct.size() != k || *distinct.rbegin() >= model.input_bits )
      throw value_error( "filter " + std::to_string( f ) + " has repeated or out-of-range inputs" );
    if ( h < 1 || filter.w1.size() != h * k || filter.b1.size() != h || filter.w2.size() != h )
      throw value_error( "filter " + std::to_string( f ) + " has inconsistent parameter shapes" );
  }
  auto const& head = model.head;
  if ( head.n_inputs != model.filters.size() || head.n_outputs != model.task.n_outputs() ||
       head.weights.size() != head.n_outputs * head.n_inputs || head.bias.size() != head.n_outputs )
    throw value_error( "head shape does not match the filters and task" );
  if ( head.mode == head_mode::ternary )
  {
    for ( auto const w : head.weights )
      if ( w != -1.0 && w != 0.0 && w != 1.0 )
        throw value_error( "ternary head has weight " + format_double( w ) );
    for ( auto const b : head.bias )
      if ( b != std::round( b ) )
        throw value_error( "ternary head has non-integer bias" );
  }
}

ttnet_model build_model( std::size_t total_bits, std::size_t n_filters, std::size_t fan_in, std::size_t hidden_width,
                         task_type const& task, std::uint64_t seed )
{
  if ( n_filters < 1 )
    throw parameter_error( "n_filters must be at least 1" );
  if ( fan_in < 1 || fan_in > max_fan_in )
    throw parameter_error( "fan-in must be in [1, " + std::to_string( max_fan_in ) + "], got " + std::to_string( fan_in ) );
  if ( fan_in > total_bits )
    throw parameter_error( "fan-in " + std::to_string( fan_in ) + " exceeds the " + std::to_string( total_bits ) + " input bits" );
  if ( hidden_width < 1 )
    throw parameter_error( "hidden_width must be at least 1" );

  rng_type rng( seed );
  std::vector<std::size_t> permutation( total_bits );
  std::iota( permutation.begin(), permutation.end(), std::size_t{ 0 } );
  shuffle( std::span{ permutation }, rng );

  if ( n_filters * fan_in < total_bits )
    warn( std::to_string( total_bits - n_filters * fan_in ) + " of " + std::to_string( total_bits ) +
          " input bits are read by no filter" );

  ttnet_model model;
  model.input_bits = total_bits;
  model.task = task;
  auto const scale = 1.0 / std::sqrt( static_cast<double>( fan_in ) );
  auto draw = [&]( std::size_t n, double bound ) {
    std::vector<double> values( n );
    for ( auto& v : values )
      v = uniform_real( rng, -bound, bound );
    return values;
  };
  for ( auto f = 0u; f < n_filters; ++f )
  {
    ltt_filter filter;
    for ( auto j = 0u; j < fan_in; ++j )
      filter.inputs.push_back( permutation[( f * fan_in + j ) % total_bits] );
    filter.hidden_width = hidden_width;
    filter.w1 = draw( hidden_width * fan_in, scale );
    filter.b1 = draw( hidden_width, scale );
    filter.w2 = draw( hidden_width, scale );
    /* centre the output on the step: b2 = -mean over all patches of w2 . h */
    double total = 0.0;
    std::vector<std::uint8_t> patch( fan_in );
    for ( std::uint32_t r = 0; r < ( 1u << fan_in ); ++r )
    {
      for ( auto j = 0u; j < fan_in; ++j )
        patch[j] = ( r >> j ) & 1u;
      total += filter_preactivation( filter, patch );
    }
    filter.b2 = -total / static_cast<double>( 1u << fan_in );
    model.filters.push_back( std::move( filter ) );
  }
  auto& head = model.head;
  head.n_outputs = task.n_outputs();
  head.n_inputs = n_filters;
  head.weights = draw( head.n_outputs * n_filters, 1.0 / std::sqrt( static_cast<double>( n_filters ) ) );
  head.bias.assign( head.n_outputs, 0.0 );
  model.provenance["seed"] = seed;
  return model;
}

double filter_preactivation( ltt_filter const& filter, std::span<std::uint8_t const> patch )
{
  auto const k = filter.fan_in();
  double z = filter.b2;
  for ( auto h = 0u; h < filter.hidden_width; ++h )
  {
    double a = filter.b1[h];
    for ( auto j = 0u; j < k; ++j )
      if ( patch[j] )
        a += filter.w1[h * k + j];
    if ( a > 0.0 )
      z += filter.w2[h] * a;
  }
  return z;
}

bool filter_forward( ltt_filter const& filter, std::span<std::uint8_t const> patch )
{
  if ( patch.size() != filter.fan_in() )
    throw shape_error( "patch has " + std::to_string( patch.size() ) + " bits, filter reads " + std::to_string( filter.fan_in() ) );
  return filter_preactivation( filter, patch ) >= 0.0;
}

bool filter_output( ltt_filter const& filter, std::span<std::uint8_t const> input )
{
  std::uint8_t patch[max_fan_in];
  for ( auto j = 0u; j < filter.fan_in(); ++j )
    patch[j] = input[filter.inputs[j]];
  return filter_preactivation( filter, { patch, filter.fan_in() } ) >= 0.0;
}

std::vector<double> forward( ttnet_model const& model, std::span<std::uint8_t const> input )
{
  if ( input.size() != model.input_bits )
    throw shape_error( "input has " + std::to_string( input.size() ) + " bits, model expects " + std::to_string( model.input_bits ) );
  auto const& head = model.head;
  std::vector<double> scores( head.bias );
  for ( auto f = 0u; f < model.filters.size(); ++f )
  {
    if ( !filter_output( model.filters[f], input ) )
      continue;
    for ( auto c = 0u; c < head.n_outputs; ++c )
      scores[c] += head.weight( c, f );
  }
  return scores;
}

double decide( task_type const& task, std::span<double const> scores, target_standardization const& standardization )
{
  switch ( task.kind )
  {
  case task_kind::binary:
    return scores[0] > 0.0 ? 1.0 : 0.0;
  case task_kind::multiclass:
    return static_cast<double>( std::max_element( scores.begin(), scores.end() ) - scores.begin() );
  case task_kind::regression:
    return scores[0] * standardization.std + standardization.mean;
  }
  return 0.0;
}

double predict( ttnet_model const& model, std::span<std::uint8_t const> input )
{
  auto const scores = forward( model, input );
  return decide( model.task, scores, model.standardization );
}

nlohmann::json to_json( training_params const& hp )
{
  return { { "epochs", hp.epochs },
           { "batch_size", hp.batch_size },
           { "learning_rate", hp.learning_rate },
           { "momentum", hp.momentum },
           { "weight_decay", hp.weight_decay },
           { "l1_head", hp.l1_head },
           { "seed", hp.seed } };
}

training_params training_params_from_json( nlohmann::json const& j )
{
  static std::set<std::string> const keys{ "epochs", "batch_size", "learning_rate", "momentum", "weight_decay", "l1_head", "seed" };
  for ( auto const& [key, _] : j.items() )
    if ( !keys.contains( key ) )
      throw config_error( "unknown training key '" + key + "'" );
  training_params hp;
  try
  {
    hp.epochs = j.value( "epochs", hp.epochs );
    hp.batch_size = j.value( "batch_size", hp.batch_size );
    hp.learning_rate = j.value( "learning_rate", hp.learning_rate );
    hp.momentum = j.value( "momentum", hp.momentum );
    hp.weight_decay = j.value( "weight_decay", hp.weight_decay );
    hp.l1_head = j.value( "l1_head", hp.l1_head );
    hp.seed = j.value( "seed", hp.seed );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw config_error( std::string{ "malformed training parameters: " } + e.what() );
  }
  if ( hp.batch_size < 1 )
    throw config_error( "batch_size must be at least 1" );
  if ( hp.learning_rate < 0.0 || hp.weight_decay < 0.0 || hp.l1_head < 0.0 || hp.momentum < 0.0 || hp.momentum >= 1.0 )
    throw config_error( "training parameters out of range" );
  return hp;
}

/* flat parameter layout ------------------------------------------------- */

namespace
{

std::size_t filter_parameter_count( ltt_filter const& filter )
{
  return filter.hidden_width * filter.fan_in() + 2 * filter.hidden_width + 1;
}

std::vector<std::size_t> filter_offsets( ttnet_model const& model )
{
  std::vector<std::size_t> offsets;
  std::size_t next = 0;
  for ( auto const& filter : model.filters )
  {
    offsets.push_back( next );
    next += filter_parameter_count( filter );
  }
  offsets.push_back( next );
  return offsets;
}

} // namespace

std::vector<double> get_parameters( ttnet_model const& model )
{
  std::vector<double> p;
  for ( auto const& filter : model.filters )
  {
    p.insert( p.end(), filter.w1.begin(), filter.w1.end() );
    p.insert( p.end(), filter.b1.begin(), filter.b1.end() );
    p.insert( p.end(), filter.w2.begin(), filter.w2.end() );
    p.push_back( filter.b2 );
  }
  p.insert( p.end(), model.head.weights.begin(), model.head.weights.end() );
  p.insert( p.end(), model.head.bias.begin(), model.head.bias.end() );
  return p;
}

void set_parameters( ttnet_model& model, std::span<double const> p )
{
  std::size_t i = 0;
  auto take = [&]( std::vector<double>& dst ) {
    if ( i + dst.size() > p.size() )
      throw shape_error( "parameter vector too short" );
    std::copy_n( p.begin() + i, dst.size(), dst.begin() );
    i += dst.size();
  };
  for ( auto& filter : model.filters )
  {
    take( filter.w1 );
    take( filter.b1 );
    take( filter.w2 );
    if ( i >= p.size() )
      throw shape_error( "parameter vector too short" );
    filter.b2 = p[i++];
  }
  take( model.head.weights );
  take( model.head.bias );
  if ( i != p.size() )
    throw shape_error( "parameter vector too long" );
}

double loss_and_gradient( ttnet_model const& model, binarized_dataset const& data, std::span<std::size_t const> rows,
                          activation_mode mode, training_params const& hp, std::vector<double>* gradient )
{
  auto const& head = model.head;
  auto const n_filters = model.filters.size();
  auto const n_out = head.n_outputs;
  auto const offsets = filter_offsets( model );
  auto const head_offset = offsets.back();
  auto const n_params = head_offset + head.weights.size() + head.bias.size();
  if ( gradient )
    gradient->assign( n_params, 0.0 );

  std::vector<double> outputs( n_filters );
  std::vector<double> preact( n_filters );
  std::vector<double> hidden_pre; /* per filter, hidden_width values */
  std::vector<std::size_t> hidden_offsets( n_filters + 1, 0 );
  for ( auto f = 0u; f < n_filters; ++f )
    hidden_offsets[f + 1] = hidden_offsets[f] + model.filters[f].hidden_width;
  hidden_pre.resize( hidden_offsets.back() );
  std::vector<double> scores( n_out );
  std::vector<double> dscores( n_out );
  std::uint8_t patch[max_fan_in];

  double loss = 0.0;
  auto const inv_n = rows.empty() ? 0.0 : 1.0 / static_cast<double>( rows.size() );

  for ( auto const r : rows )
  {
    auto const input = data.row( r );
    /* forward */
    for ( auto f = 0u; f < n_filters; ++f )
    {
      auto const& filter = model.filters[f];
      auto const k = filter.fan_in();
      for ( auto j = 0u; j < k; ++j )
        patch[j] = input[filter.inputs[j]];
      double z = filter.b2;
      for ( auto h = 0u; h < filter.hidden_width; ++h )
      {
        double a = filter.b1[h];
        for ( auto j = 0u; j < k; ++j )
          if ( patch[j] )
            a += filter.w1[h * k + j];
        hidden_pre[hidden_offsets[f] + h] = a;
        if ( a > 0.0 )
          z += filter.w2[h] * a;
      }
      preact[f] = z;
      outputs[f] = mode == activation_mode::hard ? ( z >= 0.0 ? 1.0 : 0.0 ) : std::clamp( z, -1.0, 1.0 );
    }
    for ( auto c = 0u; c < n_out; ++c )
    {
      double s = head.bias[c];
      for ( auto f = 0u; f < n_filters; ++f )
        s += head.weights[c * n_filters + f] * outputs[f];
      scores[c] = s;
    }

    /* loss and d loss / d score */
    auto const y = data.targets[r];
    switch ( model.task.kind )
    {
    case task_kind::binary:
    {
      auto const s = scores[0];
      /* log(1 + exp(-s)) for y = 1, log(1 + exp(s)) for y = 0 */
      auto const m = y == 1.0 ? -s : s;
      loss += ( m > 0.0 ? m + std::log1p( std::exp( -m ) ) : std::log1p( std::exp( m ) ) ) * inv_n;
      auto const p = 1.0 / ( 1.0 + std::exp( -s ) );
      dscores[0] = ( p - y ) * inv_n;
      break;
    }
    case task_kind::multiclass:
    {
      auto const top = *std::max_element( scores.begin(), scores.end() );
      double z = 0.0;
      for ( auto const s : scores )
        z += std::exp( s - top );
      auto const label = static_cast<std::size_t>( y );
      loss += ( std::log( z ) + top - scores[label] ) * inv_n;
      for ( auto c = 0u; c < n_out; ++c )
        dscores[c] = ( std::exp( scores[c] - top ) / z - ( c == label ? 1.0 : 0.0 ) ) * inv_n;
      break;
    }
    case task_kind::regression:
    {
      auto const target = ( y - model.standardization.mean ) / model.standardization.std;
      auto const d = scores[0] - target;
      loss += d * d * inv_n;
      dscores[0] = 2.0 * d * inv_n;
      break;
    }
    }
    if ( !gradient )
      continue;

    /* backward */
    auto& g = *gradient;
    for ( auto c = 0u; c < n_out; ++c )
    {
      g[head_offset + head.weights.size() + c] += dscores[c];
      for ( auto f = 0u; f < n_filters; ++f )
        g[head_offset + c * n_filters + f] += dscores[c] * outputs[f];
    }
    for ( auto f = 0u; f < n_filters; ++f )
    {
      double dout = 0.0;
      for ( auto c = 0u; c < n_out; ++c )
        dout += dscores[c] * head.weights[c * n_filters + f];
      /* straight-through: identity inside |z| <= 1 */
      if ( dout == 0.0 || std::abs( preact[f] ) > 1.0 )
        continue;
      auto const& filter = model.filters[f];
      auto const k = filter.fan_in();
      auto const hw = filter.hidden_width;
      auto const base = offsets[f];
      auto const dz = dout;
      g[base + hw * k + 2 * hw] += dz; /* b2 */
      for ( auto h = 0u; h < hw; ++h )
      {
        auto const a = hidden_pre[hidden_offsets[f] + h];
        if ( a <= 0.0 )
          continue;
        g[base + hw * k + hw + h] += dz * a; /* w2 */
        auto const da = dz * filter.w2[h];
        g[base + hw * k + h] += da; /* b1 */
        for ( auto j = 0u; j < k; ++j )
          if ( input[filter.inputs[j]] )
            g[base + h * k + j] += da; /* W1 */
      }
    }
  }

  /* regularization: L2 on all weight matrices, L1 on head weights */
  double reg = 0.0;
  for ( auto f = 0u; f < n_filters; ++f )
  {
    auto const& filter = model.filters[f];
    auto const k = filter.fan_in();
    auto const hw = filter.hidden_width;
    for ( auto i = 0u; i < hw * k; ++i )
    {
      reg += 0.5 * hp.weight_decay * filter.w1[i] * filter.w1[i];
      if ( gradient )
        ( *gradient )[offsets[f] + i] += hp.weight_decay * filter.w1[i];
    }
    for ( auto h = 0u; h < hw; ++h )
    {
      reg += 0.5 * hp.weight_decay * filter.w2[h] * filter.w2[h];
      if ( gradient )
        ( *gradient )[offsets[f] + hw * k + hw + h] += hp.weight_decay * filter.w2[h];
    }
  }
  for ( auto i = 0u; i < head.weights.size(); ++i )
  {
    auto const w = head.weights[i];
    reg += 0.5 * hp.weight_decay * w * w + hp.l1_head * std::abs( w );
    if ( gradient )
      ( *gradient )[head_offset + i] += hp.weight_decay * w + hp.l1_head * ( w > 0.0 ? 1.0 : ( w < 0.0 ? -1.0 : 0.0 ) );
  }
  return loss + reg;
}

double validation_metric( ttnet_model const& model, binarized_dataset const& data )
{
  if ( data.size() == 0 )
    throw metric_error( "validation set is empty" );
  std::vector<double> scores;
  std::vector<double> predictions;
  for ( auto r = 0u; r < data.size(); ++r )
  {
    auto const s = forward( model, data.row( r ) );
    scores.push_back( s[0] );
    predictions.push_back( decide( model.task, s, model.standardization ) );
  }
  switch ( model.task.kind )
  {
  case task_kind::binary:
  {
    auto const positives = std::count( data.targets.begin(), data.targets.end(), 1.0 );
    if ( positives == 0 || positives == static_cast<std::ptrdiff_t>( data.size() ) )
      return accuracy( predictions, data.targets );
    return auc( scores, data.targets );
  }
  case task_kind::multiclass:
    return accuracy( predictions, data.targets );
  case task_kind::regression:
    return -rmse( predictions, data.targets );
  }
  return 0.0;
}

training_result train( ttnet_model const& model, binarized_dataset const& train_data, binarized_dataset const& val_data,
                       training_params const& hp )
{
  if ( train_data.task != model.task || val_data.task != model.task )
    throw config_error( "task of the model (" + to_string( model.task.kind ) + ") and the datasets do not agree" );
  if ( train_data.total_bits != model.input_bits || val_data.total_bits != model.input_bits )
    throw shape_error( "dataset width does not match the model input width" );
  if ( train_data.size() == 0 )
    throw value_error( "training set is empty" );
  if ( hp.batch_size < 1 )
    throw parameter_error( "batch_size must be at least 1" );

  training_result result;
  ttnet_model current = model;
  current.provenance["seed"] = hp.seed;
  current.provenance["training"] = to_json( hp );
  if ( model.task.kind == task_kind::regression )
  {
    auto const n = static_cast<double>( train_data.size() );
    auto const mean = std::accumulate( train_data.targets.begin(), train_data.targets.end(), 0.0 ) / n;
    double var = 0.0;
    for ( auto const y : train_data.targets )
      var += ( y - mean ) * ( y - mean ) / n;
    current.standardization = { mean, var > 0.0 ? std::sqrt( var ) : 1.0 };
  }

  auto const& metric_data = val_data.size() > 0 ? val_data : train_data;
  std::vector<std::size_t> all_rows( train_data.size() );
  std::iota( all_rows.begin(), all_rows.end(), std::size_t{ 0 } );

  auto full_loss = [&]( ttnet_model const& m ) { return loss_and_gradient( m, train_data, all_rows, activation_mode::hard, hp, nullptr ); };

  double best_metric = validation_metric( current, metric_data );
  result.history.push_back( { 0, full_loss( current ), best_metric } );
  result.model = current;

  rng_type rng( hp.seed ^ 0x9e3779b97f4a7c15ull );
  auto parameters = get_parameters( current );
  std::vector<double> velocity( parameters.size(), 0.0 );
  std::vector<double> gradient;
  std::vector<std::size_t> order = all_rows;

  for ( std::size_t epoch = 1; epoch <= hp.epochs; ++epoch )
  {
    shuffle( std::span{ order }, rng );
    for ( std::size_t start = 0, batch = 0; start < order.size(); start += hp.batch_size, ++batch )
    {
      auto const rows = std::span{ order }.subspan( start, std::min( hp.batch_size, order.size() - start ) );
      auto const loss = loss_and_gradient( current, train_data, rows, activation_mode::hard, hp, &gradient );
      bool finite = std::isfinite( loss );
      for ( auto const g : gradient )
        finite = finite && std::isfinite( g );
      if ( !finite )
      {
        std::ostringstream msg;
        msg << "non-finite loss at epoch " << epoch << ", batch " << batch << " (learning rate " << hp.learning_rate << ", loss " << loss << ")";
        throw training_error( msg.str() );
      }
      for ( auto i = 0u; i < parameters.size(); ++i )
      {
        velocity[i] = hp.momentum * velocity[i] + gradient[i];
        parameters[i] -= hp.learning_rate * velocity[i];
      }
      set_parameters( current, parameters );
    }
    auto const loss = full_loss( current );
    if ( !std::isfinite( loss ) )
    {
      std::ostringstream msg;
      msg << "non-finite loss after epoch " << epoch << " (learning rate " << hp.learning_rate << ")";
      throw training_error( msg.str() );
    }
    auto const metric = validation_metric( current, metric_data );
    result.history.push_back( { epoch, loss, metric } );
    if ( metric > best_metric )
    {
      best_metric = metric;
      result.best_epoch = epoch;
      result.model = current;
    }
  }
  result.model.provenance["best_epoch"] = result.best_epoch;
  return result;
}

ttnet_model select_filters( ttnet_model const& model, std::span<std::size_t const> keep )
{
  ttnet_model out = model;
  out.filters.clear();
  auto& head = out.head;
  head.n_inputs = keep.size();
  head.weights.assign( head.n_outputs * keep.size(), 0.0 );
  for ( auto i = 0u; i < keep.size(); ++i )
  {
    out.filters.push_back( model.filters.at( keep[i] ) );
    for ( auto c = 0u; c < head.n_outputs; ++c )
      head.weight( c, i ) = model.head.weight( c, keep[i] );
  }
  return out;
}

ttnet_model drop_zero_weight_filters( ttnet_model const& model )
{
  std::vector<std::size_t> keep;
  for ( auto f = 0u; f < model.filters.size(); ++f )
  {
    bool used = false;
    for ( auto c = 0u; c < model.head.n_outputs; ++c )
      used = used || model.head.weight( c, f ) != 0.0;
    if ( used )
      keep.push_back( f );
  }
  return select_filters( model, keep );
}

ttnet_model ternarize_with_threshold( ttnet_model const& model, double tau, double* scale_out )
{
  auto out = model;
  auto& head = out.head;
  head.mode = head_mode::ternary;
  double kept_sum = 0.0;
  std::size_t kept = 0;
  for ( auto& w : head.weights )
  {
    if ( std::abs( w ) >= tau && w != 0.0 )
    {
      kept_sum += std::abs( w );
      ++kept;
      w = w > 0.0 ? 1.0 : -1.0;
    }
    else
      w = 0.0;
  }
  auto const scale = kept ? kept_sum / static_cast<double>( kept ) : 1.0;
  for ( auto& b : head.bias )
    b = std::round( b / scale );
  if ( model.task.kind == task_kind::regression )
    out.standardization.std *= scale;
  if ( scale_out )
    *scale_out = scale;
  return out;
}

ternarize_result ternarize_head( ttnet_model const& model, binarized_dataset const& data )
{
  if ( model.head.mode != head_mode::floating )
    throw parameter_error( "head is already ternary" );
  ternarize_result result;
  result.float_metric = validation_metric( model, data );

  std::vector<double> candidates;
  for ( auto const w : model.head.weights )
    if ( w != 0.0 )
      candidates.push_back( std::abs( w ) );
  std::sort( candidates.begin(), candidates.end() );
  candidates.erase( std::unique( candidates.begin(), candidates.end() ), candidates.end() );
  if ( candidates.empty() )
    throw parameter_error( "cannot ternarize a head whose weights are all zero" );

  auto const degradation = [&]( double metric ) {
    auto const base = std::abs( result.float_metric );
    return base > 0.0 ? ( result.float_metric - metric ) / base : result.float_metric - metric;
  };

  /* largest threshold within 2% of the float metric; best metric otherwise */
  std::optional<std::size_t> chosen;
  std::size_t best = 0;
  for ( auto i = 0u; i < candidates.size(); ++i )
  {
    auto const candidate = ternarize_with_threshold( model, candidates[i] );
    auto const metric = validation_metric( candidate, data );
    auto const kept = static_cast<std::size_t>( std::count_if( candidate.head.weights.begin(), candidate.head.weights.end(),
                                                               []( double w ) { return w != 0.0; } ) );
    result.trace.push_back( { candidates[i], metric, kept } );
    if ( degradation( metric ) < 0.02 )
      chosen = i;
    if ( metric > result.trace[best].metric )
      best = i;
  }
  auto const pick = chosen.value_or( best );
  result.threshold = candidates[pick];
  result.ternary_metric = result.trace[pick].metric;
  auto const ternary = ternarize_with_threshold( model, result.threshold, &result.scale );
  if ( std::all_of( ternary.head.weights.begin(), ternary.head.weights.end(), []( double w ) { return w == 0.0; } ) )
  {
    std::ostringstream msg;
    msg << "ternarization zeroed every weight; threshold scan:";
    for ( auto const& step : result.trace )
      msg << " (" << step.threshold << ": " << step.metric << ", " << step.kept << " kept)";
    throw parameter_error( msg.str() );
  }
  result.model = drop_zero_weight_filters( ternary );
  result.model.provenance["ternarize"] = { { "threshold", result.threshold },
                                           { "scale", result.scale },
                                           { "float_metric", result.float_metric },
                                           { "ternary_metric", result.ternary_metric } };
  return result;
}

/* serialization --------------------------------------------------------- */

nlohmann::json to_json( ttnet_model const& model )
{
  nlohmann::json j;
  j["format"] = "ttrules-model";
  j["version"] = 1;
  j["input_bits"] = model.input_bits;
  j["task"] = to_string( model.task.kind );
  j["n_classes"] = model.task.n_classes;
  j["filters"] = nlohmann::json::array();
  for ( auto const& f : model.filters )
    j["filters"].push_back( { { "inputs", f.inputs },
                              { "hidden_width", f.hidden_width },
                              { "w1", f.w1 },
                              { "b1", f.b1 },
                              { "w2", f.w2 },
                              { "b2", f.b2 } } );
  j["head"] = { { "mode", to_string( model.head.mode ) },
                { "n_outputs", model.head.n_outputs },
                { "weights", model.head.weights },
                { "bias", model.head.bias } };
  j["standardization"] = { { "mean", model.standardization.mean }, { "std", model.standardization.std } };
  j["provenance"] = model.provenance;
  return j;
}

ttnet_model model_from_json( nlohmann::json const& j )
{
  ttnet_model model;
  try
  {
    if ( j.at( "format" ) != "ttrules-model" || j.at( "version" ) != 1 )
      throw config_error( "not a version-1 ttrules model file" );
    model.input_bits = j.at( "input_bits" ).get<std::size_t>();
    model.task.kind = parse_task_kind( j.at( "task" ).get<std::string>() );
    model.task.n_classes = j.at( "n_classes" ).get<std::size_t>();
    for ( auto const& jf : j.at( "filters" ) )
    {
      ltt_filter f;
      f.inputs = jf.at( "inputs" ).get<std::vector<std::size_t>>();
      f.hidden_width = jf.at( "hidden_width" ).get<std::size_t>();
      f.w1 = jf.at( "w1" ).get<std::vector<double>>();
      f.b1 = jf.at( "b1" ).get<std::vector<double>>();
      f.w2 = jf.at( "w2" ).get<std::vector<double>>();
      f.b2 = jf.at( "b2" ).get<double>();
      model.filters.push_back( std::move( f ) );
    }
    auto const& jh = j.at( "head" );
    model.head.mode = parse_head_mode( jh.at( "mode" ).get<std::string>() );
    model.head.n_outputs = jh.at( "n_outputs" ).get<std::size_t>();
    model.head.n_inputs = model.filters.size();
    model.head.weights = jh.at( "weights" ).get<std::vector<double>>();
    model.head.bias = jh.at( "bias" ).get<std::vector<double>>();
    model.standardization.mean = j.at( "standardization" ).at( "mean" ).get<double>();
    model.standardization.std = j.at( "standardization" ).at( "std" ).get<double>();
    model.provenance = j.value( "provenance", nlohmann::json::object() );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw config_error( std::string{ "malformed model file: " } + e.what() );
  }
  validate( model );
  return model;
}

} // namespace ttrules
