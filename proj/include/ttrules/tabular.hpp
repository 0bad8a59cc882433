#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace ttrules
{

enum class feature_kind
{
  continuous,
  categorical,
  binary /* already-binary, passed through as one bit */
};

enum class task_kind
{
  binary,
  multiclass,
  regression
};

struct task_type
{
  task_kind kind = task_kind::binary;
  std::size_t n_classes = 2; /* 0 for regression */

  bool is_classification() const { return kind != task_kind::regression; }
  /* number of head outputs: one score for binary and regression */
  std::size_t n_outputs() const { return kind == task_kind::multiclass ? n_classes : 1u; }

  friend bool operator==( task_type const&, task_type const& ) = default;
};

std::string to_string( task_kind kind );
task_kind parse_task_kind( std::string const& text );
std::string to_string( feature_kind kind );
feature_kind parse_feature_kind( std::string const& text );

struct feature_spec
{
  std::string name;
  feature_kind kind = feature_kind::continuous;
  std::vector<std::string> categories; /* categorical only */
  std::size_t n_thresholds = 8;        /* continuous only */
};

/*! \brief Declarative description of a CSV file: features, target, task.

  JSON form:
  \verbatim
  { "target": "Class", "task": "binary",
    "features": [ { "name": "Mitoses", "kind": "continuous", "n_thresholds": 8 },
                  { "name": "Color", "kind": "categorical", "categories": ["r", "g"] },
                  { "name": "Flag", "kind": "binary" } ] }
  \endverbatim
  For multiclass tasks "n_classes" may be given; otherwise it is inferred
  from the distinct target values at load time.
*/
struct schema
{
  std::vector<feature_spec> features;
  std::string target;
  task_type task;
};

void validate( schema const& s );
schema schema_from_json( nlohmann::json const& j );
nlohmann::json to_json( schema const& s );
schema load_schema( std::filesystem::path const& path );

/* One typed column per schema feature; numeric for continuous and binary
   features, labels for categorical ones. */
struct raw_column
{
  std::vector<double> numeric;
  std::vector<std::string> labels;
};

struct raw_dataset
{
  schema spec;
  std::vector<raw_column> columns;
  std::vector<double> targets;          /* class index or real value */
  std::vector<std::string> class_names; /* classification only, sorted */

  std::size_t size() const { return targets.size(); }
};

raw_dataset read_csv( std::istream& in, schema const& s, std::string const& source = "<stream>" );
raw_dataset load_csv( std::filesystem::path const& path, schema const& s );
raw_dataset subset( raw_dataset const& raw, std::span<std::size_t const> rows );

struct feature_encoding
{
  std::string name;
  feature_kind kind = feature_kind::continuous;
  std::vector<double> thresholds;      /* continuous: strictly ascending */
  std::vector<std::string> categories; /* categorical: bit order */
  std::size_t first_bit = 0;
  std::size_t width = 0;
};

/* Where a bit comes from. position is the threshold rank for continuous
   features and the category index for categorical ones. */
struct bit_origin
{
  std::size_t feature = 0;
  feature_kind kind = feature_kind::binary;
  std::size_t position = 0;
};

class binarizer_map
{
public:
  binarizer_map() = default;
  explicit binarizer_map( std::vector<feature_encoding> features, std::vector<std::string> warnings = {} );

  std::vector<feature_encoding> const& features() const { return features_; }
  std::size_t total_bits() const { return origins_.size(); }
  std::vector<std::string> const& bit_names() const { return names_; }
  bit_origin const& origin( std::size_t bit ) const { return origins_.at( bit ); }
  std::vector<std::string> const& warnings() const { return warnings_; }

  /* bits as a contiguous range [first_bit, first_bit + width) */
  feature_encoding const& feature_of_bit( std::size_t bit ) const { return features_.at( origin( bit ).feature ); }

  nlohmann::json to_json() const;
  static binarizer_map from_json( nlohmann::json const& j );

  friend bool operator==( binarizer_map const& a, binarizer_map const& b )
  {
    return a.to_json() == b.to_json();
  }

private:
  std::vector<feature_encoding> features_;
  std::vector<bit_origin> origins_;
  std::vector<std::string> names_;
  std::vector<std::string> warnings_;
};

/* midpoint-interpolated quantile of sorted values, q in [0, 1] */
double midpoint_quantile( std::span<double const> sorted, double q );

binarizer_map fit_binarizer( raw_dataset const& raw );

/* Row-major bit matrix plus targets. */
struct binarized_dataset
{
  std::size_t n_samples = 0;
  std::size_t total_bits = 0;
  std::vector<std::uint8_t> bits;
  std::vector<double> targets;
  task_type task;
  binarizer_map map;

  std::span<std::uint8_t const> row( std::size_t i ) const
  {
    return { bits.data() + i * total_bits, total_bits };
  }
  std::size_t size() const { return n_samples; }
};

binarized_dataset binarize( raw_dataset const& raw, binarizer_map const& map );
binarized_dataset subset( binarized_dataset const& ds, std::span<std::size_t const> rows );

/* Checks thermometer monotonicity, one-hot exclusivity and label range;
   returns a description of the first violation or an empty string. */
std::string check_invariants( binarized_dataset const& ds );

struct fold
{
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

std::vector<fold> kfold_split( std::span<double const> targets, task_type const& task, std::size_t k, std::uint64_t seed );
std::vector<fold> kfold_split( binarized_dataset const& ds, std::size_t k, std::uint64_t seed );

/* shortest decimal representation that reads back to the same double */
std::string format_double( double value );
double parse_double( std::string const& text );

} // namespace ttrules
