#ifndef RESOFIT_MANIFEST_HPP
#define RESOFIT_MANIFEST_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "resofit/trace.hpp"

namespace resofit {

/// Parses a sweep manifest: a JSON array of entries
///   {file, format, source_power_dbm, line_attenuation_db, temperature_k, label}
/// with format "touchstone" or "csv". Each referenced file is loaded and
/// parsed; paths are resolved against base_dir. Records are returned in
/// manifest order.
std::vector<SweepRecord> load_manifest(const std::string& json_text,
                                       const std::filesystem::path& base_dir);

/// Reads a manifest file; entries resolve relative to its directory.
std::vector<SweepRecord> load_manifest_file(const std::filesystem::path& path);

/// Reads a whole file into a string; throws Error(io) on failure.
std::string read_text_file(const std::filesystem::path& path);

/// Writes text to a file; throws Error(io) on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace resofit

#endif
