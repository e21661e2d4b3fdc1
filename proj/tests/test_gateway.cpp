/*
 * Copyright (C) 2026 The Partlift Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <atomic>
#include <random>
#include <thread>

#include <spdlog/sinks/ringbuffer_sink.h>
#include <spdlog/spdlog.h>

#include "partlift/gateway/remote.hpp"
#include "partlift/gateway/segmenter.hpp"
#include "partlift/gateway/wire.hpp"
#include "partlift/render/png_io.hpp"
#include "partlift/render/rasterizer.hpp"
#include "support.hpp"

// After Eigen: <resolv.h> defines a `_res` macro that clashes with Eigen internals.
#include <httplib.h>

using namespace partlift;
using partlift::testing::TempDir;

namespace {

Mask random_mask(std::mt19937_64& rng, ImageSize size) {
    Mask m(size);
    const int mode = static_cast<int>(rng() % 4);
    for (std::size_t i = 0; i < m.pixel_count(); ++i) {
        if (mode == 0) m.set(i, rng() % 2);
        if (mode == 1) m.set(i, rng() % 10 == 0);
        if (mode == 2) m.set(i, rng() % 10 != 0);
        if (mode == 3) m.set(i, (i / 7) % 3 == 0);
    }
    return m;
}

RgbImage half_red(ImageSize size) {
    RgbImage img(size, Rgb{255, 255, 255});
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width / 2; ++x) img.at(x, y) = Rgb{255, 0, 0};
    }
    return img;
}

// In-process stand-in for the bridge service. Instruction keywords pick the
// behavior; otherwise a red color-threshold rule produces the mask.
class FakeBridge {
public:
    FakeBridge() {
        server_.Post("/segment", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            SegmentRequest request;
            try {
                request = decode_request(nlohmann::json::parse(req.body));
            } catch (const std::exception& e) {
                res.status = 400;
                res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
                return;
            }
            const std::string& text = request.instruction;
            nlohmann::json body;
            if (text.find("status") != std::string::npos) {
                res.status = 503;
                return;
            }
            if (text.find("slow") != std::string::npos) std::this_thread::sleep_for(std::chrono::milliseconds(1500));
            if (text.find("garbage") != std::string::npos) {
                res.set_content("{not json", "application/json");
                return;
            }
            SegmentResponse response;
            response.mask = Mask(request.image.size);
            if (text.find("echo") != std::string::npos) {
                response.mask = Mask(request.image.size, true);
                response.explanation = "echo";
            } else if (text.find("red") != std::string::npos) {
                for (std::size_t i = 0; i < request.image.pixels.size(); ++i) {
                    const Rgb c = request.image.pixels[i];
                    const double d2 = (255.0 - c.r) * (255.0 - c.r) + double(c.g) * c.g + double(c.b) * c.b;
                    response.mask.set(i, d2 <= 60.0 * 60.0);
                }
                response.explanation = "The red region.";
            } else {
                response.has_segmentation = false;
                response.explanation = "No color word found.";
            }
            body = encode_response(response);
            if (text.find("shortrle") != std::string::npos) body["rle"].back() = body["rle"].back().get<int>() - 1;
            if (text.find("wrongsize") != std::string::npos) body["width"] = request.image.size.width + 1;
            res.set_content(body.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeBridge() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int requests() const { return requests_; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<int> requests_{0};
};

SegmentRequest make_request(const std::string& instruction, ImageSize size = {64, 48}) {
    return SegmentRequest{half_red(size), instruction, "q0", 3};
}

RemoteOptions fast_options() {
    RemoteOptions o;
    o.timeout_s = 5.0;
    o.retries = 2;
    o.initial_backoff_s = 0.01;
    return o;
}

}  // namespace

TEST_CASE("rle: worked encodings") {
    Mask m({4, 1});
    CHECK(rle_encode(m) == std::vector<std::uint64_t>{4});
    m.set(0, true);
    m.set(1, true);
    CHECK(rle_encode(m) == std::vector<std::uint64_t>{0, 2, 2});
    m.set(3, true);
    CHECK(rle_encode(m) == std::vector<std::uint64_t>{0, 2, 1, 1});
    const std::vector<std::uint64_t> runs{1, 2, 1};
    const Mask d = rle_decode(runs, {2, 2});
    CHECK_FALSE(d.at(0, 0));
    CHECK(d.at(1, 0));
    CHECK(d.at(0, 1));
    CHECK_FALSE(d.at(1, 1));
    const std::vector<std::uint64_t> short_runs{1, 2};
    CHECK_THROWS_AS(rle_decode(short_runs, {2, 2}), ProtocolError);
    const std::vector<std::uint64_t> long_runs{1, 2, 9};
    CHECK_THROWS_AS(rle_decode(long_runs, {2, 2}), ProtocolError);
    const std::vector<std::uint64_t> huge{~std::uint64_t{0}, 5};
    CHECK_THROWS_AS(rle_decode(huge, {2, 2}), ProtocolError);
}

TEST_CASE("rle: decode inverts encode (property)") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const ImageSize size{1 + static_cast<int>(rng() % 40), 1 + static_cast<int>(rng() % 40)};
        const Mask m = random_mask(rng, size);
        const auto runs = rle_encode(m);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            total += runs[i];
            if (i > 0) CHECK(runs[i] > 0);
        }
        CHECK(total == size.pixel_count());
        CHECK(rle_decode(runs, size) == m);
    }
}

TEST_CASE("base64: reference vectors and errors") {
    auto enc = [](const std::string& s) {
        return base64_encode(std::vector<std::uint8_t>(s.begin(), s.end()));
    };
    CHECK(enc("") == "");
    CHECK(enc("f") == "Zg==");
    CHECK(enc("fo") == "Zm8=");
    CHECK(enc("foo") == "Zm9v");
    CHECK(enc("foobar") == "Zm9vYmFy");
    const auto d = base64_decode("Zm8=");
    CHECK(std::string(d.begin(), d.end()) == "fo");
    CHECK(base64_decode("").empty());
    CHECK_THROWS_AS(base64_decode("Zm8"), ProtocolError);
    CHECK_THROWS_AS(base64_decode("Z!8="), ProtocolError);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        std::vector<std::uint8_t> bytes(rng() % 100);
        for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
    }
}

TEST_CASE("wire: request and response codecs") {
    const SegmentRequest req = make_request("segment the red part");
    const nlohmann::json body = encode_request(req);
    CHECK(body["instruction"] == "segment the red part");
    CHECK(body["query_id"] == "q0");
    CHECK(body["view_index"] == 3);
    const SegmentRequest back = decode_request(body);
    CHECK(back.image == req.image);
    CHECK(back.instruction == req.instruction);
    CHECK(back.view_index == 3);

    nlohmann::json broken = body;
    broken.erase("instruction");
    CHECK_THROWS_AS(decode_request(broken), ProtocolError);
    broken = body;
    broken["image_png"] = "@@@@";
    CHECK_THROWS_AS(decode_request(broken), ProtocolError);

    SegmentResponse resp;
    resp.mask = Mask({3, 2});
    resp.mask.set(4, true);
    resp.explanation = "x";
    const nlohmann::json rb = encode_response(resp);
    CHECK(rb["width"] == 3);
    CHECK(rb["height"] == 2);
    CHECK(rb["has_segmentation"] == true);
    CHECK(rb["rle"] == nlohmann::json::array({4, 1, 1}));
    const SegmentResponse rback = decode_response(rb);
    CHECK(rback.mask == resp.mask);
    CHECK(rback.explanation == "x");

    nlohmann::json bad = rb;
    bad["has_segmentation"] = false;
    CHECK_THROWS_AS(decode_response(bad), ProtocolError);
    bad = rb;
    bad["rle"] = nlohmann::json::array({4, 1});
    CHECK_THROWS_AS(decode_response(bad), ProtocolError);
    bad = rb;
    bad["rle"] = nlohmann::json::array({4, -1, 3});
    CHECK_THROWS_AS(decode_response(bad), ProtocolError);
    bad = rb;
    bad["width"] = "3";
    CHECK_THROWS_AS(decode_response(bad), ProtocolError);
    CHECK_THROWS_AS(decode_response(nlohmann::json::array()), ProtocolError);
}

TEST_CASE("request and response validation") {
    SegmentRequest req = make_request("");
    CHECK_THROWS_AS(req.validate(), std::invalid_argument);
    req = make_request("x");
    req.image = RgbImage();
    CHECK_THROWS_AS(req.validate(), std::invalid_argument);

    SegmentResponse resp;
    resp.mask = Mask({2, 2}, true);
    CHECK_NOTHROW(resp.validate({2, 2}));
    CHECK_THROWS_AS(resp.validate({2, 3}), std::invalid_argument);
    resp.has_segmentation = false;
    CHECK_THROWS_AS(resp.validate({2, 2}), std::invalid_argument);
}

TEST_CASE("oracle: masks follow point ownership") {
    // Two columns of points in front of an axis camera.
    std::vector<Vec3> pos;
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            pos.emplace_back(2.0, -0.5 + 0.05 * i, -0.5 + 0.05 * j);
            labels.push_back((i + j) % 2 == 0 ? 3 : 5);  // checkerboard
        }
    }
    const PointCloud cloud(pos, std::vector<Rgb>(pos.size(), Rgb{100, 100, 100}), std::nullopt, labels);
    CameraPose pose;
    pose.target = Vec3(1, 0, 0);
    pose.image_size = {96, 96};
    const ViewRender r = render_view(cloud, pose, {1, 0.01});

    const SegmentResponse m3 = oracle_segment(cloud, r, 3, "lid");
    const SegmentResponse m5 = oracle_segment(cloud, r, 5);
    CHECK(m3.has_segmentation);
    CHECK(m3.explanation == "The highlighted region is the lid of the object.");
    CHECK(m5.explanation == "The highlighted region is the part 5 of the object.");
    for (std::size_t i = 0; i < r.point_index.size(); ++i) {
        const auto owner = r.point_index[i];
        CHECK(m3.mask[i] == (owner != kNoPoint && labels[static_cast<std::size_t>(owner)] == 3));
        CHECK(m5.mask[i] == (owner != kNoPoint && labels[static_cast<std::size_t>(owner)] == 5));
    }
    CHECK(m3.mask.any());

    const SegmentResponse absent = oracle_segment(cloud, r, 9);
    CHECK_FALSE(absent.mask.any());
    CHECK(absent.has_segmentation);
    CHECK_THROWS_AS(oracle_segment(cloud, r, -1), GatewayError);
    CHECK_THROWS_AS(oracle_segment(cloud.without_labels(), r, 3), std::invalid_argument);

    // Every owned pixel belongs to category 3.
    const PointCloud all3 = cloud.with_labels(std::vector<int>(pos.size(), 3));
    const SegmentResponse full = oracle_segment(all3, r, 3);
    for (std::size_t i = 0; i < r.point_index.size(); ++i) CHECK(full.mask[i] == (r.point_index[i] != kNoPoint));
}

TEST_CASE("oracle backend: query routing and errors") {
    const PointCloud cloud({Vec3(2, 0, 0)}, {Rgb{}}, std::nullopt, std::vector<int>{4});
    CameraPose pose;
    pose.target = Vec3(1, 0, 0);
    pose.image_size = {16, 16};
    const std::vector<ViewRender> renders{render_view(cloud, pose, {}, 0)};
    const OracleSegmenter seg(cloud, renders, {{"a", 4}, {"b", 7}}, {{4, "seat"}});

    SegmentRequest req{renders[0].image, "segment the seat", "a", 0};
    const SegmentResponse resp = seg.segment(req);
    CHECK(resp.mask.count() == 13);
    CHECK(resp.explanation.find("seat") != std::string::npos);
    CHECK(seg.segment(req).mask == resp.mask);  // deterministic

    req.query_id = "b";  // category missing from the part names
    CHECK_THROWS_AS(seg.segment(req), GatewayError);
    req.query_id = "zzz";
    try {
        seg.segment(req);
        FAIL("expected an error");
    } catch (const GatewayError& e) {
        CHECK(e.kind() == GatewayErrorKind::UnknownCategory);
    }
    req.query_id = "a";
    req.view_index = 1;
    try {
        seg.segment(req);
        FAIL("expected an error");
    } catch (const GatewayError& e) {
        CHECK(e.kind() == GatewayErrorKind::InvalidRequest);
        CHECK(e.view_index() == 1);
    }
}

TEST_CASE("replay backend") {
    TempDir dir("replay");
    Mask m({8, 6});
    m.set(2, 3, true);
    write_mask_png(m, ReplaySegmenter::mask_path(dir.path(), "obj_q0", 2));
    partlift::testing::write_file(ReplaySegmenter::text_path(dir.path(), "obj_q0", 2), "It is the handle.");
    CHECK(ReplaySegmenter::mask_path(dir.path(), "obj_q0", 2).filename() == "obj_q0_view2.png");

    const ReplaySegmenter seg(dir.path());
    SegmentRequest req{RgbImage({8, 6}, Rgb{}), "segment the handle", "obj_q0", 2};
    const SegmentResponse resp = seg.segment(req);
    CHECK(resp.mask == m);
    CHECK(resp.explanation == "It is the handle.");
    CHECK(resp.has_segmentation);

    req.view_index = 3;
    try {
        seg.segment(req);
        FAIL("expected an error");
    } catch (const GatewayError& e) {
        CHECK(e.kind() == GatewayErrorKind::MaskNotFound);
        CHECK(std::string(e.what()).find("mask not found") != std::string::npos);
    }
    req.view_index = 2;
    req.image = RgbImage({9, 6}, Rgb{});
    try {
        seg.segment(req);
        FAIL("expected an error");
    } catch (const GatewayError& e) {
        CHECK(e.kind() == GatewayErrorKind::ProtocolViolation);
    }
}

TEST_CASE("remote: red heuristic round trip yields the analytic half mask") {
    FakeBridge bridge;
    const ImageSize size{512, 512};
    const SegmentResponse resp =
        RemoteSegmenter(bridge.url(), fast_options()).segment(make_request("segment the red part", size));
    Mask expected(size);
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width / 2; ++x) expected.set(x, y, true);
    }
    CHECK(resp.mask == expected);
    CHECK(resp.has_segmentation);
    CHECK(resp.explanation == "The red region.");
}

TEST_CASE("remote: echo, text-only and path prefix") {
    FakeBridge bridge;
    const RemoteSegmenter seg(bridge.url() + "/", fast_options());
    const SegmentResponse all = seg.segment(make_request("echo"));
    CHECK(all.mask.count() == 64u * 48u);
    const SegmentResponse none = seg.segment(make_request("describe the object"));
    CHECK_FALSE(none.has_segmentation);
    CHECK_FALSE(none.mask.any());
    CHECK(remote_segment(bridge.url(), make_request("echo"), 5.0, 0).mask == all.mask);
}

TEST_CASE("remote: protocol violations are not retried") {
    FakeBridge bridge;
    const RemoteSegmenter seg(bridge.url(), fast_options());
    for (const char* text : {"red shortrle", "garbage", "red wrongsize"}) {
        try {
            seg.segment(make_request(text));
            FAIL("expected a protocol violation");
        } catch (const GatewayError& e) {
            CHECK(e.kind() == GatewayErrorKind::ProtocolViolation);
            CHECK(e.attempts() == 1);
        }
    }
    try {
        seg.segment(make_request("status"));
        FAIL("expected an HTTP status error");
    } catch (const GatewayError& e) {
        CHECK(e.kind() == GatewayErrorKind::HttpStatus);
        CHECK(std::string(e.what()).find("503") != std::string::npos);
    }
    CHECK(bridge.requests() == 4);
}

TEST_CASE("remote: refused connection is retried and logged") {
    auto sink = std::make_shared<spdlog::sinks::ringbuffer_sink_mt>(32);
    auto previous = spdlog::default_logger();
    spdlog::set_default_logger(std::make_shared<spdlog::logger>("capture", sink));

    const std::string url = "http://127.0.0.1:" + std::to_string(partlift::testing::free_port());
    RemoteOptions options = fast_options();
    options.retries = 2;
    int attempts = 0;
    GatewayErrorKind kind = GatewayErrorKind::Io;
    try {
        RemoteSegmenter(url, options).segment(make_request("echo"));
    } catch (const GatewayError& e) {
        attempts = e.attempts();
        kind = e.kind();
    }
    spdlog::set_default_logger(previous);

    CHECK(kind == GatewayErrorKind::Connect);
    CHECK(attempts >= 3);
    std::size_t logged = 0;
    for (const auto& line : sink->last_formatted()) logged += line.find("attempt") != std::string::npos;
    CHECK(logged >= 3);
}

TEST_CASE("remote: slow service times out") {
    FakeBridge bridge;
    RemoteOptions options = fast_options();
    options.timeout_s = 0.3;
    options.retries = 0;
    try {
        RemoteSegmenter(bridge.url(), options).segment(make_request("slow echo"));
        FAIL("expected a timeout");
    } catch (const GatewayError& e) {
        CHECK(e.kind() == GatewayErrorKind::Timeout);
    }
}

TEST_CASE("remote: endpoint validation") {
    CHECK_THROWS_AS(RemoteSegmenter("https://x"), std::invalid_argument);
    CHECK_THROWS_AS(RemoteSegmenter("http://"), std::invalid_argument);
    RemoteOptions o;
    o.timeout_s = 0.0;
    CHECK_THROWS_AS(RemoteSegmenter("http://localhost:1", o), std::invalid_argument);
    FakeBridge bridge;
    try {
        RemoteSegmenter(bridge.url(), fast_options()).segment(make_request(""));
        FAIL("expected an invalid request");
    } catch (const GatewayError& e) {
        CHECK(e.kind() == GatewayErrorKind::InvalidRequest);
    }
    CHECK(bridge.requests() == 0);
}

TEST_CASE("remote: random masks survive the wire (property)") {
    // Echo server variant: returns the mask carried in the instruction seed.
    httplib::Server server;
    server.Post("/segment", [](const httplib::Request& req, httplib::Response& res) {
        const SegmentRequest r = decode_request(nlohmann::json::parse(req.body));
        std::mt19937_64 rng(std::stoull(r.instruction));
        SegmentResponse out;
        out.mask = random_mask(rng, r.image.size);
        out.explanation = r.instruction;
        res.set_content(encode_response(out).dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    const RemoteSegmenter seg("http://127.0.0.1:" + std::to_string(port), fast_options());
    std::mt19937_64 sizes(1);
    for (int i = 0; i < 100; ++i) {
        const ImageSize size{1 + static_cast<int>(sizes() % 50), 1 + static_cast<int>(sizes() % 50)};
        const SegmentResponse resp = seg.segment(SegmentRequest{RgbImage(size, Rgb{}), std::to_string(i), "q", 0});
        std::mt19937_64 rng(static_cast<std::uint64_t>(i));
        CHECK(resp.mask == random_mask(rng, size));
    }
    server.stop();
    t.join();
}
