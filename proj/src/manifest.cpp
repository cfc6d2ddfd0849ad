#include "resofit/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "resofit/csv.hpp"
#include "resofit/errors.hpp"
#include "resofit/touchstone.hpp"

namespace resofit {

namespace {

double require_number(const nlohmann::json& entry, const char* key, std::size_t idx) {
    if (!entry.contains(key) || !entry[key].is_number())
        throw Error(ErrorCode::parse, "trace-io",
                    "manifest entry " + std::to_string(idx) + ": missing numeric field '" +
                        key + "'");
    return entry[key].get<double>();
}

} // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw Error(ErrorCode::io, "trace-io", "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    if (!file.good() && !file.eof())
        throw Error(ErrorCode::io, "trace-io", "failed reading '" + path.string() + "'");
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw Error(ErrorCode::io, "trace-io", "cannot open '" + path.string() + "' for writing");
    file << text;
    if (!file.good())
        throw Error(ErrorCode::io, "trace-io", "failed writing '" + path.string() + "'");
}

std::vector<SweepRecord> load_manifest(const std::string& json_text,
                                       const std::filesystem::path& base_dir) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse, "trace-io", std::string("manifest: ") + e.what());
    }
    if (!doc.is_array())
        throw Error(ErrorCode::parse, "trace-io", "manifest: top-level value must be an array");

    std::vector<SweepRecord> records;
    records.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& entry = doc[i];
        if (!entry.is_object())
            throw Error(ErrorCode::parse, "trace-io",
                        "manifest entry " + std::to_string(i) + ": must be an object");
        if (!entry.contains("file") || !entry["file"].is_string())
            throw Error(ErrorCode::parse, "trace-io",
                        "manifest entry " + std::to_string(i) + ": missing string field 'file'");
        if (!entry.contains("format") || !entry["format"].is_string())
            throw Error(ErrorCode::parse, "trace-io",
                        "manifest entry " + std::to_string(i) + ": missing string field 'format'");

        SweepRecord record;
        record.source_power_dbm = require_number(entry, "source_power_dbm", i);
        record.line_attenuation_db = require_number(entry, "line_attenuation_db", i);
        record.temperature_k = require_number(entry, "temperature_k", i);
        if (record.line_attenuation_db < 0)
            throw Error(ErrorCode::parse, "trace-io",
                        "manifest entry " + std::to_string(i) + ": negative attenuation");
        if (!(record.temperature_k > 0))
            throw Error(ErrorCode::parse, "trace-io",
                        "manifest entry " + std::to_string(i) + ": temperature must be positive");

        const std::filesystem::path file =
            base_dir / entry["file"].get<std::string>();
        record.label = entry.contains("label") && entry["label"].is_string()
                           ? entry["label"].get<std::string>()
                           : file.stem().string();

        const std::string format = entry["format"].get<std::string>();
        const std::string text = read_text_file(file);
        if (format == "touchstone")
            record.trace = parse_touchstone(text);
        else if (format == "csv")
            record.trace = parse_csv(text).trace;
        else
            throw Error(ErrorCode::parse, "trace-io",
                        "manifest entry " + std::to_string(i) + ": unknown format '" +
                            format + "'");
        record.validate();
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<SweepRecord> load_manifest_file(const std::filesystem::path& path) {
    return load_manifest(read_text_file(path), path.parent_path());
}

} // namespace resofit
