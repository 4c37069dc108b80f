#include "textvqa/backends.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "textvqa/digest.hpp"
#include "textvqa/text.hpp"

namespace fs = std::filesystem;

namespace textvqa::backends {

BackendRequest BackendRequest::make(std::string stage, json payload) {
    BackendRequest r;
    r.digest = request_digest(stage, payload);
    r.stage = std::move(stage);
    r.payload = std::move(payload);
    return r;
}

// ---- fixture backend --------------------------------------------------------

FixtureBackend::FixtureBackend(std::string fixture_dir) : fixture_dir_(std::move(fixture_dir)) {}

bool FixtureBackend::has(const std::string& digest) const {
    return fs::exists(fs::path(fixture_dir_) / (digest + ".json"));
}

json FixtureBackend::invoke(const BackendRequest& request) {
    fs::path path = fs::path(fixture_dir_) / (request.digest + ".json");
    std::ifstream in(path);
    if (!in)
        throw BackendError(ErrorKind::MissingFixture,
                           "missing fixture for stage " + request.stage + " digest " + request.digest);
    return json::parse(in);
}

// ---- recording backend ------------------------------------------------------

namespace {
std::mutex g_index_mutex;

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << content;
    }
    fs::rename(tmp, path);
}
}  // namespace

RecordingBackend::RecordingBackend(std::shared_ptr<Backend> inner, std::string fixture_dir)
    : inner_(std::move(inner)), fixture_dir_(std::move(fixture_dir)) {
    fs::create_directories(fixture_dir_);
}

json RecordingBackend::invoke(const BackendRequest& request) {
    json response = inner_->invoke(request);
    fs::path dir(fixture_dir_);
    write_file_atomic(dir / (request.digest + ".json"), response.dump(2) + "\n");

    std::lock_guard<std::mutex> lock(g_index_mutex);
    fs::path index_path = dir / "index.json";
    json index = json::object();
    if (fs::exists(index_path)) {
        std::ifstream in(index_path);
        index = json::parse(in, nullptr, false);
        if (index.is_discarded()) index = json::object();
    }
    index[request.digest] = {{"image_id", request.payload.value("image_id", "")},
                             {"stage", request.stage}};
    write_file_atomic(index_path, index.dump(2) + "\n");
    return response;
}

// ---- remote backend ---------------------------------------------------------

RemoteBackend::RemoteBackend(std::map<std::string, std::string> endpoints, int max_attempts,
                             int backoff_initial_ms)
    : endpoints_(std::move(endpoints)),
      max_attempts_(max_attempts),
      backoff_initial_ms_(backoff_initial_ms) {}

json RemoteBackend::invoke(const BackendRequest& request) {
    auto it = endpoints_.find(request.stage);
    if (it == endpoints_.end())
        throw BackendError(ErrorKind::Unreachable, "no endpoint configured for stage " + request.stage);

    // Split "http://host:port/path" into base and path.
    const std::string& url = it->second;
    std::size_t scheme_end = url.find("://");
    std::size_t path_start =
        scheme_end == std::string::npos ? url.find('/') : url.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    json body{{"stage", request.stage},
              {"payload", request.payload},
              {"request_digest", request.digest}};
    std::string body_str = body.dump();

    int delay_ms = backoff_initial_ms_;
    std::string last_error;
    for (int attempt = 0; attempt < max_attempts_; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            delay_ms *= 2;
        }
        httplib::Client client(base);
        client.set_connection_timeout(10);
        client.set_read_timeout(120);
        auto res = client.Post(path, body_str, "application/json");
        if (!res) {
            last_error = "connection failed";
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw BackendError(ErrorKind::BadResponse,
                               "stage " + request.stage + " returned status " + std::to_string(res->status));
        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded())
            throw BackendError(ErrorKind::BadResponse, "stage " + request.stage + " returned invalid JSON");
        return parsed;
    }
    throw BackendError(ErrorKind::Unreachable,
                       "stage " + request.stage + " unreachable after " +
                           std::to_string(max_attempts_) + " attempts: " + last_error);
}

std::shared_ptr<Backend> make_backend(const PipelineConfig& config) {
    if (config.backend_mode == "remote") return std::make_shared<RemoteBackend>(config.endpoints);
    return std::make_shared<FixtureBackend>(config.fixture_dir);
}

// ---- payloads ---------------------------------------------------------------

json spot_payload(const ImageRecord& image) {
    return json{{"image_id", image.image_id}, {"source_uri", image.source_uri}};
}

json ground_payload(const ImageRecord& image) {
    return json{{"image_id", image.image_id}, {"source_uri", image.source_uri}};
}

json caption_payload(const ImageRecord& image, const RegionRef& region,
                     const std::optional<BoundingBox>& bbox, const std::string& prompt) {
    json j{{"image_id", image.image_id},
           {"source_uri", image.source_uri},
           {"region", region_label(region)},
           {"prompt", prompt}};
    j["bbox"] = bbox ? json(*bbox) : json(nullptr);
    return j;
}

json qgen_payload(const ImageRecord& image, const std::string& prompt) {
    return json{{"image_id", image.image_id}, {"prompt", prompt}};
}

json validate_payload(const ImageRecord& image, const std::string& prompt) {
    return json{{"image_id", image.image_id}, {"prompt", prompt}};
}

// ---- typed calls ------------------------------------------------------------

namespace {

void raise_on_error_response(const json& response, const std::string& stage) {
    if (!response.is_object() || !response.contains("error")) return;
    const json& err = response.at("error");
    std::string kind = err.value("kind", "");
    std::string message = err.value("message", "backend error in stage " + stage);
    if (kind == "undecodable_image") throw BackendError(ErrorKind::UndecodableImage, message);
    throw BackendError(ErrorKind::Unreachable, message);
}

}  // namespace

std::vector<OcrToken> normalize_tokens(const std::vector<OcrToken>& raw, const ImageRecord& image) {
    std::vector<OcrToken> out;
    for (const OcrToken& t : raw) {
        BoundingBox box = t.bbox.clamped(static_cast<double>(image.width_px),
                                         static_cast<double>(image.height_px));
        if (!validate(box).empty()) continue;  // degenerate after clamping
        double conf = std::min(std::max(t.confidence, 0.0), 1.0);
        // Spotters may emit multiword strings; split into word tokens sharing
        // the original bbox.
        for (const std::string& word : text::split_ws(t.text)) {
            out.push_back(OcrToken{word, box, conf});
        }
    }
    return out;
}

std::vector<ObjectCrop> normalize_crops(const std::vector<BoundingBox>& boxes,
                                        const std::vector<std::string>& phrases,
                                        const ImageRecord& image) {
    std::vector<ObjectCrop> out;
    std::vector<BoundingBox> seen;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        BoundingBox box = boxes[i].clamped(static_cast<double>(image.width_px),
                                           static_cast<double>(image.height_px));
        if (!validate(box).empty()) continue;
        bool dup = false;
        for (const BoundingBox& s : seen) {
            if (s == box) { dup = true; break; }
        }
        if (dup) continue;
        seen.push_back(box);
        ObjectCrop crop;
        crop.crop_id = "c" + std::to_string(out.size());
        crop.bbox = box;
        crop.phrase = i < phrases.size() ? phrases[i] : "";
        out.push_back(std::move(crop));
    }
    return out;
}

std::vector<OcrToken> spot_text(Backend& backend, const ImageRecord& image) {
    auto request = BackendRequest::make("spot", spot_payload(image));
    json response = backend.invoke(request);
    raise_on_error_response(response, "spot");
    if (!response.contains("tokens") || !response.at("tokens").is_array())
        throw BackendError(ErrorKind::BadResponse, "spot response missing 'tokens' array");
    std::vector<OcrToken> raw;
    for (const json& jt : response.at("tokens")) raw.push_back(jt.get<OcrToken>());
    return normalize_tokens(raw, image);
}

std::vector<ObjectCrop> ground_objects(Backend& backend, const ImageRecord& image) {
    auto request = BackendRequest::make("ground", ground_payload(image));
    json response = backend.invoke(request);
    raise_on_error_response(response, "ground");
    if (!response.contains("crops") || !response.at("crops").is_array())
        throw BackendError(ErrorKind::BadResponse, "ground response missing 'crops' array");
    std::vector<BoundingBox> boxes;
    std::vector<std::string> phrases;
    for (const json& jc : response.at("crops")) {
        boxes.push_back(jc.at("bbox").get<BoundingBox>());
        phrases.push_back(jc.value("phrase", ""));
    }
    return normalize_crops(boxes, phrases, image);
}

std::string caption_crop(Backend& backend, const ImageRecord& image, const RegionRef& region,
                         const std::optional<BoundingBox>& bbox, const std::string& prompt) {
    auto request = BackendRequest::make("caption", caption_payload(image, region, bbox, prompt));
    json response = backend.invoke(request);
    raise_on_error_response(response, "caption");
    std::string caption = text::collapse_ws(response.value("caption", ""));
    if (caption.empty())
        throw BackendError(ErrorKind::EmptyResponse, "empty caption for region " + region_label(region));
    return caption;
}

std::string generate_question(Backend& backend, const ImageRecord& image,
                              const std::string& prompt) {
    auto request = BackendRequest::make("qgen", qgen_payload(image, prompt));
    json response = backend.invoke(request);
    raise_on_error_response(response, "qgen");
    std::string question = text::collapse_ws(response.value("question", ""));
    if (question.empty()) throw BackendError(ErrorKind::EmptyResponse, "empty question response");
    return question;
}

std::string validate_qa_raw(Backend& backend, const ImageRecord& image,
                            const std::string& prompt) {
    auto request = BackendRequest::make("validate", validate_payload(image, prompt));
    json response = backend.invoke(request);
    raise_on_error_response(response, "validate");
    return response.value("response", "");
}

}  // namespace textvqa::backends
