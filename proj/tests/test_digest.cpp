#include <doctest.h>

#include "textvqa/digest.hpp"

using namespace textvqa;
using json = nlohmann::json;

TEST_CASE("request digest is deterministic and order-insensitive") {
    json a, b;
    a["image_id"] = "img_001";
    a["prompt"] = "p";
    b["prompt"] = "p";
    b["image_id"] = "img_001";
    CHECK(request_digest("spot", a) == request_digest("spot", b));
    CHECK(request_digest("spot", a) != request_digest("ground", a));

    json c = a;
    c["prompt"] = "q";
    CHECK(request_digest("spot", a) != request_digest("spot", c));
}

TEST_CASE("fnv1a is stable") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
    CHECK(fnv1a_hex("abc").size() == 16);
}
