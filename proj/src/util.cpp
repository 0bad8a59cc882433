#include <ttrules/util.hpp>

#include <atomic>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

namespace ttrules
{

std::uint64_t fnv1a64( std::string_view data )
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( auto const c : data )
  {
    h ^= static_cast<unsigned char>( c );
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64( std::uint64_t value )
{
  static char const digits[] = "0123456789abcdef";
  std::string out( 16, '0' );
  for ( auto i = 0; i < 16; ++i )
    out[15 - i] = digits[( value >> ( 4 * i ) ) & 0xf];
  return out;
}

namespace
{

std::mutex sink_mutex;
std::function<void( std::string const& )> warning_sink = []( std::string const& message ) {
  std::cerr << "warning: " << message << '\n';
};

} // namespace

void set_warning_sink( std::function<void( std::string const& )> sink )
{
  std::lock_guard lock( sink_mutex );
  warning_sink = std::move( sink );
}

void warn( std::string const& message )
{
  std::lock_guard lock( sink_mutex );
  if ( warning_sink )
    warning_sink( message );
}

void parallel_for( std::size_t n, std::size_t jobs, std::function<void( std::size_t )> const& body )
{
  if ( jobs <= 1 || n <= 1 )
  {
    for ( std::size_t i = 0; i < n; ++i )
      body( i );
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for ( auto i = next++; i < n; i = next++ )
    {
      try
      {
        body( i );
      }
      catch ( ... )
      {
        std::lock_guard lock( failure_mutex );
        if ( !failure )
          failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> threads;
  for ( std::size_t t = 0; t < std::min( jobs, n ); ++t )
    threads.emplace_back( worker );
  threads.clear();
  if ( failure )
    std::rethrow_exception( failure );
}

} // namespace ttrules
