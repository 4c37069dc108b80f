#pragma once

#include <string>
#include <vector>

#include "textvqa/types.hpp"

namespace textvqa::curation {

struct Manifest {
    std::vector<ImageRecord> entries;
    std::string source_name;
};

class ManifestError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV with header row: image_id,source_uri,width_px,height_px.
// Parse errors carry the line number; duplicate ids list the offenders.
Manifest load_manifest(const std::string& path);

// Entry i goes to shard (i mod shard_count); order preserved per shard.
Manifest partition(const Manifest& manifest, std::size_t shard_index, std::size_t shard_count);

}  // namespace textvqa::curation
