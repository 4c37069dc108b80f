#pragma once

#include <map>
#include <vector>

#include "textvqa/types.hpp"

namespace textvqa::alignment {

struct AssignmentReport {
    std::vector<CropContext> contexts;  // crops in input order, whole-image last
    std::size_t unassigned_count = 0;   // tokens that fell back to the whole image
    std::map<std::string, std::size_t> per_crop_token_counts;
};

// Intersection over token area: area(token ∩ crop) / area(token).
double ioa(const BoundingBox& token_box, const BoundingBox& crop_box);

// Each token goes to the crop maximizing ioa when that maximum >= threshold;
// ties broken by smaller crop area, then lexicographic crop_id. Everything
// else lands in the whole-image context. Token order is preserved per context.
AssignmentReport assign_tokens(const std::vector<OcrToken>& tokens,
                               const std::vector<ObjectCrop>& crops, double threshold);

}  // namespace textvqa::alignment
