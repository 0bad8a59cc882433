#include <ttrules/artifact.hpp>

#include <ttrules/error.hpp>
#include <ttrules/util.hpp>

#include <fstream>

namespace ttrules
{

namespace
{

std::string checksum_of( nlohmann::json document )
{
  document.erase( "checksum" );
  return hex64( fnv1a64( document.dump() ) );
}

} // namespace

nlohmann::json seal( nlohmann::json document )
{
  document["checksum"] = checksum_of( document );
  return document;
}

void verify_seal( nlohmann::json const& document, std::string const& what )
{
  if ( !document.is_object() || !document.contains( "checksum" ) || !document["checksum"].is_string() )
    throw config_error( what + " has no checksum" );
  if ( document["checksum"].get<std::string>() != checksum_of( document ) )
    throw config_error( what + " failed its checksum; the file was modified" );
}

void write_json( std::filesystem::path const& path, nlohmann::json const& document )
{
  if ( path.has_parent_path() )
    std::filesystem::create_directories( path.parent_path() );
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw config_error( "cannot write " + path.string() );
  out << document.dump( 2 ) << '\n';
}

nlohmann::json read_json( std::filesystem::path const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw config_error( "cannot open " + path.string() );
  try
  {
    return nlohmann::json::parse( in );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw config_error( path.string() + " is not valid JSON: " + e.what() );
  }
}

void write_text( std::filesystem::path const& path, std::string const& text )
{
  if ( path.has_parent_path() )
    std::filesystem::create_directories( path.parent_path() );
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw config_error( "cannot write " + path.string() );
  out << text;
}

} // namespace ttrules
