#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace ttrules
{

/* Adds a "checksum" member computed over the rest of the document. */
nlohmann::json seal( nlohmann::json document );

/* Throws config_error when the checksum is missing or does not match. */
void verify_seal( nlohmann::json const& document, std::string const& what );

void write_json( std::filesystem::path const& path, nlohmann::json const& document );
nlohmann::json read_json( std::filesystem::path const& path );

void write_text( std::filesystem::path const& path, std::string const& text );

} // namespace ttrules
