#pragma once

#include <stdexcept>
#include <string>

namespace ttrules
{

/* Coarse error category; the CLI maps it to an exit code. */
enum class error_kind
{
  config,
  data,
  exactness,
  training,
  internal
};

class error : public std::runtime_error
{
public:
  error( error_kind kind, std::string const& what )
      : std::runtime_error( what ), kind_( kind )
  {
  }

  error_kind kind() const noexcept { return kind_; }

private:
  error_kind kind_;
};

#define TTRULES_DEFINE_ERROR( name, category )                        \
  class name : public error                                          \
  {                                                                  \
  public:                                                            \
    explicit name( std::string const& what )                         \
        : error( error_kind::category, what )                        \
    {                                                                \
    }                                                                \
  };

TTRULES_DEFINE_ERROR( config_error, config )
TTRULES_DEFINE_ERROR( parameter_error, config )
TTRULES_DEFINE_ERROR( schema_error, data )
TTRULES_DEFINE_ERROR( parse_error, data )
TTRULES_DEFINE_ERROR( value_error, data )
TTRULES_DEFINE_ERROR( stratification_error, data )
TTRULES_DEFINE_ERROR( shape_error, data )
TTRULES_DEFINE_ERROR( metric_error, data )
TTRULES_DEFINE_ERROR( training_error, training )
TTRULES_DEFINE_ERROR( exactness_error, exactness )
TTRULES_DEFINE_ERROR( order_error, internal )
TTRULES_DEFINE_ERROR( store_error, internal )
TTRULES_DEFINE_ERROR( extraction_error, internal )

#undef TTRULES_DEFINE_ERROR

} // namespace ttrules
