#include "textvqa/curation.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "textvqa/text.hpp"

namespace textvqa::curation {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(text::trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

}  // namespace

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError("cannot open manifest: " + path);

    Manifest manifest;
    manifest.source_name = path;

    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    std::set<std::string> seen_ids;
    std::vector<std::string> duplicates;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (!saw_header) {
            if (fields != std::vector<std::string>{"image_id", "source_uri", "width_px", "height_px"})
                throw ManifestError("manifest line " + std::to_string(line_no) +
                                    ": expected header 'image_id,source_uri,width_px,height_px'");
            saw_header = true;
            continue;
        }
        if (fields.size() != 4)
            throw ManifestError("manifest line " + std::to_string(line_no) + ": expected 4 fields, got " +
                                std::to_string(fields.size()));
        ImageRecord rec;
        rec.image_id = fields[0];
        rec.source_uri = fields[1];
        try {
            rec.width_px = std::stoll(fields[2]);
            rec.height_px = std::stoll(fields[3]);
        } catch (const std::exception&) {
            throw ManifestError("manifest line " + std::to_string(line_no) + ": non-numeric dimensions");
        }
        auto violations = validate(rec);
        if (!violations.empty())
            throw ManifestError("manifest line " + std::to_string(line_no) + ": invalid record (" +
                                violations.front() + ")");
        if (!seen_ids.insert(rec.image_id).second) duplicates.push_back(rec.image_id);
        manifest.entries.push_back(std::move(rec));
    }

    if (!duplicates.empty()) {
        std::string msg = "duplicate image_id in manifest:";
        for (const auto& id : duplicates) msg += " " + id;
        throw ManifestError(msg);
    }
    // Empty file (no header) is a valid empty manifest.
    return manifest;
}

Manifest partition(const Manifest& manifest, std::size_t shard_index, std::size_t shard_count) {
    if (shard_count == 0 || shard_index >= shard_count)
        throw ManifestError("shard index " + std::to_string(shard_index) + " out of range for " +
                            std::to_string(shard_count) + " shards");
    Manifest out;
    out.source_name = manifest.source_name;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        if (i % shard_count == shard_index) out.entries.push_back(manifest.entries[i]);
    }
    return out;
}

}  // namespace textvqa::curation
