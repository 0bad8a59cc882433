#pragma once

#include <ttrules/tabular.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace ttrules
{

/* Largest fan-in whose truth table we are willing to enumerate. */
inline constexpr std::size_t max_fan_in = 10;

/*! \brief One Learning Truth Table block.

  Reads `inputs.size()` bits and computes
  step( w2 . relu( W1 x + b1 ) + b2 ), step(z) = [z >= 0].
  W1 is stored row-major, hidden_width rows of fan_in columns.
*/
struct ltt_filter
{
  std::vector<std::size_t> inputs;
  std::size_t hidden_width = 0;
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;

  std::size_t fan_in() const { return inputs.size(); }

  friend bool operator==( ltt_filter const&, ltt_filter const& ) = default;
};

enum class head_mode
{
  floating,
  ternary
};

std::string to_string( head_mode mode );
head_mode parse_head_mode( std::string const& text );

/* Linear layer over filter outputs: one weight row per output. */
struct linear_head
{
  head_mode mode = head_mode::floating;
  std::size_t n_outputs = 1;
  std::size_t n_inputs = 0;
  std::vector<double> weights; /* n_outputs x n_inputs, row-major */
  std::vector<double> bias;    /* n_outputs */

  double weight( std::size_t output, std::size_t input ) const { return weights[output * n_inputs + input]; }
  double& weight( std::size_t output, std::size_t input ) { return weights[output * n_inputs + input]; }

  friend bool operator==( linear_head const&, linear_head const& ) = default;
};

/* Regression targets are trained in standardized units. */
struct target_standardization
{
  double mean = 0.0;
  double std = 1.0;

  friend bool operator==( target_standardization const&, target_standardization const& ) = default;
};

struct ttnet_model
{
  std::size_t input_bits = 0;
  task_type task;
  std::vector<ltt_filter> filters;
  linear_head head;
  target_standardization standardization;
  nlohmann::json provenance = nlohmann::json::object();

  std::size_t n_filters() const { return filters.size(); }
};

void validate( ttnet_model const& model );

/* Each filter reads a contiguous window (mod total_bits) of a seeded random
   permutation of the input bits; parameters are uniform in +-1/sqrt(k). */
ttnet_model build_model( std::size_t total_bits, std::size_t n_filters, std::size_t fan_in, std::size_t hidden_width,
                         task_type const& task, std::uint64_t seed );

double filter_preactivation( ltt_filter const& filter, std::span<std::uint8_t const> patch );
bool filter_forward( ltt_filter const& filter, std::span<std::uint8_t const> patch );

/* Gathers the filter's bits from a full input vector. */
bool filter_output( ltt_filter const& filter, std::span<std::uint8_t const> input );

std::vector<double> forward( ttnet_model const& model, std::span<std::uint8_t const> input );

/* Turns head scores into a prediction: class index (binary: score > 0;
   multiclass: argmax, lowest index on ties) or an un-standardized value. */
double decide( task_type const& task, std::span<double const> scores, target_standardization const& standardization );

double predict( ttnet_model const& model, std::span<std::uint8_t const> input );

struct training_params
{
  std::size_t epochs = 60;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  double l1_head = 0.0;
  std::uint64_t seed = 0;
};

nlohmann::json to_json( training_params const& hp );
training_params training_params_from_json( nlohmann::json const& j );

enum class activation_mode
{
  hard,     /* step forward, straight-through backward */
  surrogate /* clip(z, -1, 1) forward; its exact derivative matches the STE */
};

/* All trainable parameters as one flat vector: per filter W1, b1, w2, b2,
   then head weights and head bias. */
std::vector<double> get_parameters( ttnet_model const& model );
void set_parameters( ttnet_model& model, std::span<double const> parameters );

/* Mean loss over `rows` plus regularization; fills `gradient` (flat layout)
   when non-null. Regression targets are standardized with the model's
   standardization constants. */
double loss_and_gradient( ttnet_model const& model, binarized_dataset const& data, std::span<std::size_t const> rows,
                          activation_mode mode, training_params const& hp, std::vector<double>* gradient );

/* AUC for binary tasks (accuracy if only one class is present), accuracy
   for multiclass, negated RMSE for regression; higher is better. */
double validation_metric( ttnet_model const& model, binarized_dataset const& data );

struct epoch_record
{
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_metric = 0.0;
};

struct training_result
{
  ttnet_model model;
  std::vector<epoch_record> history; /* entry 0 is the initial model */
  std::size_t best_epoch = 0;
};

training_result train( ttnet_model const& model, binarized_dataset const& train_data, binarized_dataset const& val_data,
                       training_params const& hp );

/* Keeps only the listed filters (and their head columns). */
ttnet_model select_filters( ttnet_model const& model, std::span<std::size_t const> keep );
ttnet_model drop_zero_weight_filters( ttnet_model const& model );

struct ternarize_step
{
  double threshold = 0.0;
  double metric = 0.0;
  std::size_t kept = 0;
};

struct ternarize_result
{
  ttnet_model model;
  double threshold = 0.0;
  double float_metric = 0.0;
  double ternary_metric = 0.0;
  double scale = 1.0;
  std::vector<ternarize_step> trace;
};

/* w -> sign(w) when |w| >= threshold, else 0; bias -> round(bias / scale)
   with scale = mean |kept w|. Regression folds the scale into the target
   standard deviation. Zero-weight filters are kept. */
ttnet_model ternarize_with_threshold( ttnet_model const& model, double threshold, double* scale = nullptr );

/* Scans thresholds over the sorted |w| and keeps the largest one whose
   metric on `data` is within 2% (relative) of the float head, falling back
   to the best-scoring threshold; then drops filters with zero weight. */
ternarize_result ternarize_head( ttnet_model const& model, binarized_dataset const& data );

/* Model file: versioned JSON with a checksum over its content. */
nlohmann::json to_json( ttnet_model const& model );
ttnet_model model_from_json( nlohmann::json const& j );

} // namespace ttrules
