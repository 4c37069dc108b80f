#include "textvqa/alignment.hpp"

#include <algorithm>

namespace textvqa::alignment {

double ioa(const BoundingBox& token_box, const BoundingBox& crop_box) {
    double ix = std::max(0.0, std::min(token_box.x_max, crop_box.x_max) -
                                  std::max(token_box.x_min, crop_box.x_min));
    double iy = std::max(0.0, std::min(token_box.y_max, crop_box.y_max) -
                                  std::max(token_box.y_min, crop_box.y_min));
    double denom = token_box.area();
    if (denom <= 0.0) return 0.0;
    return (ix * iy) / denom;
}

AssignmentReport assign_tokens(const std::vector<OcrToken>& tokens,
                               const std::vector<ObjectCrop>& crops, double threshold) {
    AssignmentReport report;
    report.contexts.reserve(crops.size() + 1);
    for (const ObjectCrop& crop : crops) {
        CropContext ctx;
        ctx.region = crop.crop_id;
        ctx.bbox = crop.bbox;
        report.contexts.push_back(std::move(ctx));
        report.per_crop_token_counts[crop.crop_id] = 0;
    }
    CropContext whole;
    whole.region = WholeImage{};
    report.contexts.push_back(std::move(whole));

    for (const OcrToken& token : tokens) {
        const ObjectCrop* best = nullptr;
        double best_score = -1.0;
        std::size_t best_index = 0;
        for (std::size_t i = 0; i < crops.size(); ++i) {
            double score = ioa(token.bbox, crops[i].bbox);
            bool better = false;
            if (score > best_score) {
                better = true;
            } else if (score == best_score && best != nullptr) {
                double a = crops[i].bbox.area(), b = best->bbox.area();
                if (a < b || (a == b && crops[i].crop_id < best->crop_id)) better = true;
            }
            if (better) {
                best = &crops[i];
                best_score = score;
                best_index = i;
            }
        }
        if (best != nullptr && best_score >= threshold) {
            report.contexts[best_index].tokens.push_back(token);
            report.per_crop_token_counts[best->crop_id] += 1;
        } else {
            report.contexts.back().tokens.push_back(token);
            report.unassigned_count += 1;
        }
    }
    return report;
}

}  // namespace textvqa::alignment
