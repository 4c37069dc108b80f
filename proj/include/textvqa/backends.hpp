#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "textvqa/types.hpp"

namespace textvqa::backends {

struct BackendRequest {
    std::string stage;  // spot | ground | caption | qgen | validate
    json payload;
    std::string digest;  // request_digest(stage, payload)

    static BackendRequest make(std::string stage, json payload);
};

enum class ErrorKind {
    Unreachable,       // transport failure after retries
    UndecodableImage,  // backend could not decode the referenced image
    MissingFixture,    // no fixture for this digest (test-authoring error)
    BadResponse,       // response did not parse / missing fields
    EmptyResponse,     // model returned nothing usable
};

class BackendError : public std::runtime_error {
public:
    BackendError(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Raw transport: a request in, a JSON response document out. Implementations
// must be safe for concurrent in-flight requests.
class Backend {
public:
    virtual ~Backend() = default;
    virtual json invoke(const BackendRequest& request) = 0;
};

// Replays stored responses from a directory of <digest>.json files plus an
// index.json mapping digests to (image_id, stage). Read-only, fully concurrent.
class FixtureBackend : public Backend {
public:
    explicit FixtureBackend(std::string fixture_dir);
    json invoke(const BackendRequest& request) override;
    bool has(const std::string& digest) const;
    std::string dir() const { return fixture_dir_; }

private:
    std::string fixture_dir_;
};

// Writes every served response into a fixture directory (used to author
// fixture corpora from a scripted source).
class RecordingBackend : public Backend {
public:
    RecordingBackend(std::shared_ptr<Backend> inner, std::string fixture_dir);
    json invoke(const BackendRequest& request) override;

private:
    std::shared_ptr<Backend> inner_;
    std::string fixture_dir_;
};

// POSTs {stage, payload, request_digest} to the stage's endpoint URL.
// Transient failures are retried with exponential backoff.
class RemoteBackend : public Backend {
public:
    // endpoints: stage -> URL, e.g. "http://host:8080/spot".
    RemoteBackend(std::map<std::string, std::string> endpoints, int max_attempts = 3,
                  int backoff_initial_ms = 1000);
    json invoke(const BackendRequest& request) override;

private:
    std::map<std::string, std::string> endpoints_;
    int max_attempts_;
    int backoff_initial_ms_;
};

std::shared_ptr<Backend> make_backend(const PipelineConfig& config);

// ---- payload builders (the remote/fixture wire contract) -------------------

json spot_payload(const ImageRecord& image);
json ground_payload(const ImageRecord& image);
json caption_payload(const ImageRecord& image, const RegionRef& region,
                     const std::optional<BoundingBox>& bbox, const std::string& prompt);
json qgen_payload(const ImageRecord& image, const std::string& prompt);
json validate_payload(const ImageRecord& image, const std::string& prompt);

// ---- typed stage calls with response normalization --------------------------

// Throws BackendError on transport/decode failure; a response carrying an
// {"error": {...}} object is mapped to the matching BackendError kind.
std::vector<OcrToken> spot_text(Backend& backend, const ImageRecord& image);
std::vector<ObjectCrop> ground_objects(Backend& backend, const ImageRecord& image);
std::string caption_crop(Backend& backend, const ImageRecord& image, const RegionRef& region,
                         const std::optional<BoundingBox>& bbox, const std::string& prompt);
std::string generate_question(Backend& backend, const ImageRecord& image,
                              const std::string& prompt);
// Returns the raw model text; verdict extraction is the prompting module's job.
std::string validate_qa_raw(Backend& backend, const ImageRecord& image,
                            const std::string& prompt);

// Normalization, exposed for property tests. Both are idempotent.
std::vector<OcrToken> normalize_tokens(const std::vector<OcrToken>& raw, const ImageRecord& image);
std::vector<ObjectCrop> normalize_crops(const std::vector<BoundingBox>& boxes,
                                        const std::vector<std::string>& phrases,
                                        const ImageRecord& image);

}  // namespace textvqa::backends
