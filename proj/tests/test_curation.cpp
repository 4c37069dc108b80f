#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "textvqa/curation.hpp"

using namespace textvqa;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = (fs::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::trunc);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("load_manifest parses a well-formed file") {
    auto path = write_temp("manifest_ok.csv",
                           "image_id,source_uri,width_px,height_px\n"
                           "img_001,file:///a.jpg,640,480\n"
                           "img_002,file:///b.jpg,800,600\n"
                           "img_003,file:///c.jpg,1024,768\n");
    auto m = curation::load_manifest(path);
    REQUIRE(m.entries.size() == 3);
    CHECK(m.entries[0].image_id == "img_001");
    CHECK(m.entries[2].height_px == 768);
}

TEST_CASE("duplicate image_id is an error naming the offender") {
    auto path = write_temp("manifest_dup.csv",
                           "image_id,source_uri,width_px,height_px\n"
                           "img_001,file:///a.jpg,640,480\n"
                           "img_001,file:///b.jpg,800,600\n");
    CHECK_THROWS_WITH_AS(curation::load_manifest(path),
                         doctest::Contains("img_001"), curation::ManifestError);
}

TEST_CASE("empty file yields an empty manifest") {
    auto path = write_temp("manifest_empty.csv", "");
    CHECK(curation::load_manifest(path).entries.empty());
}

TEST_CASE("parse errors carry the line number") {
    auto path = write_temp("manifest_bad.csv",
                           "image_id,source_uri,width_px,height_px\n"
                           "img_001,file:///a.jpg,640\n");
    CHECK_THROWS_WITH_AS(curation::load_manifest(path), doctest::Contains("line 2"),
                         curation::ManifestError);

    auto path2 = write_temp("manifest_bad2.csv",
                            "image_id,source_uri,width_px,height_px\n"
                            "img_001,file:///a.jpg,abc,480\n");
    CHECK_THROWS_WITH_AS(curation::load_manifest(path2), doctest::Contains("line 2"),
                         curation::ManifestError);
}

TEST_CASE("partition follows the modulo rule") {
    curation::Manifest m;
    for (int i = 0; i < 10; ++i)
        m.entries.push_back(ImageRecord{"img_" + std::to_string(i), "u", 10, 10});

    auto shard0 = curation::partition(m, 0, 2);
    REQUIRE(shard0.entries.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(shard0.entries[i].image_id == "img_" + std::to_string(2 * i));

    CHECK(curation::partition(m, 0, 1).entries.size() == 10);
    CHECK_THROWS_AS(curation::partition(m, 2, 2), curation::ManifestError);
}

TEST_CASE("sharding is a partition: disjoint cover of 100 synthetic entries") {
    curation::Manifest m;
    for (int i = 0; i < 100; ++i)
        m.entries.push_back(ImageRecord{"img_" + std::to_string(i), "u", 10, 10});

    for (std::size_t shard_count : {1u, 2u, 3u, 7u}) {
        std::vector<std::string> seen;
        for (std::size_t s = 0; s < shard_count; ++s) {
            auto shard = curation::partition(m, s, shard_count);
            // Order preserved within each shard.
            for (std::size_t i = 1; i < shard.entries.size(); ++i) {
                auto a = std::stoi(shard.entries[i - 1].image_id.substr(4));
                auto b = std::stoi(shard.entries[i].image_id.substr(4));
                CHECK(a < b);
            }
            for (const auto& e : shard.entries) seen.push_back(e.image_id);
        }
        CHECK(seen.size() == 100);
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
}
