#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace ttrules
{

/* 64-bit FNV-1a, used for config hashes and artifact checksums */
std::uint64_t fnv1a64( std::string_view data );
std::string hex64( std::uint64_t value );

/* Warnings go through a replaceable sink (stderr by default). */
void set_warning_sink( std::function<void( std::string const& )> sink );
void warn( std::string const& message );

/* Runs body(i) for i in [0, n) on up to `jobs` threads. Each index is
   processed exactly once; the caller owns result ordering. */
void parallel_for( std::size_t n, std::size_t jobs, std::function<void( std::size_t )> const& body );

} // namespace ttrules
