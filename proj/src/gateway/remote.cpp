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

#include "partlift/gateway/remote.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "partlift/gateway/wire.hpp"

namespace partlift {
namespace {

std::pair<time_t, time_t> split_seconds(double seconds) {
    const auto whole = static_cast<time_t>(std::floor(seconds));
    const auto micros = static_cast<time_t>(std::llround((seconds - static_cast<double>(whole)) * 1e6));
    return {whole, micros};
}

}  // namespace

RemoteSegmenter::RemoteSegmenter(std::string endpoint, RemoteOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
    const std::string scheme = "http://";
    if (endpoint_.rfind(scheme, 0) != 0) {
        throw std::invalid_argument("remote endpoint must be an http:// URL, got '" + endpoint_ + "'");
    }
    const auto slash = endpoint_.find('/', scheme.size());
    host_ = endpoint_.substr(0, slash);
    path_prefix_ = slash == std::string::npos ? "" : endpoint_.substr(slash);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    if (host_.size() == scheme.size()) throw std::invalid_argument("remote endpoint has no host");
    if (!(options_.timeout_s > 0.0)) throw std::invalid_argument("timeout must be positive");
    if (options_.retries < 0) throw std::invalid_argument("retries must be nonnegative");
}

SegmentResponse RemoteSegmenter::segment(const SegmentRequest& request) const {
    try {
        request.validate();
    } catch (const std::invalid_argument& e) {
        throw GatewayError(GatewayErrorKind::InvalidRequest, e.what(), request.query_id, request.view_index);
    }
    const std::string body = encode_request(request).dump();
    const std::string path = path_prefix_ + "/segment";
    const auto [sec, usec] = split_seconds(options_.timeout_s);

    const int max_attempts = options_.retries + 1;
    double backoff = options_.initial_backoff_s;
    for (int attempt = 1;; ++attempt) {
        httplib::Client client(host_);
        client.set_connection_timeout(sec, usec);
        client.set_read_timeout(sec, usec);
        client.set_write_timeout(sec, usec);

        const auto started = std::chrono::steady_clock::now();
        auto result = client.Post(path, body, "application/json");
        if (result) {
            if (result->status < 200 || result->status >= 300) {
                throw GatewayError(GatewayErrorKind::HttpStatus,
                                   "HTTP " + std::to_string(result->status) + " from " + endpoint_, request.query_id,
                                   request.view_index, attempt);
            }
            SegmentResponse response;
            try {
                response = decode_response(nlohmann::json::parse(result->body));
            } catch (const nlohmann::json::exception& e) {
                throw GatewayError(GatewayErrorKind::ProtocolViolation, std::string("bad JSON: ") + e.what(),
                                   request.query_id, request.view_index, attempt);
            } catch (const ProtocolError& e) {
                throw GatewayError(GatewayErrorKind::ProtocolViolation, e.what(), request.query_id,
                                   request.view_index, attempt);
            }
            if (response.mask.size() != request.image.size) {
                throw GatewayError(GatewayErrorKind::ProtocolViolation, "mask dimensions differ from the request image",
                                   request.query_id, request.view_index, attempt);
            }
            return response;
        }

        const auto error = result.error();
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        GatewayErrorKind kind = GatewayErrorKind::Connect;
        if (error == httplib::Error::ConnectionTimeout ||
            ((error == httplib::Error::Read || error == httplib::Error::Write) &&
             elapsed >= 0.9 * options_.timeout_s)) {
            kind = GatewayErrorKind::Timeout;
        }
        spdlog::warn("segment request to {} failed (attempt {}/{}): {}", endpoint_, attempt, max_attempts,
                     httplib::to_string(error));
        if (attempt >= max_attempts) {
            throw GatewayError(kind,
                               httplib::to_string(error) + " after " + std::to_string(attempt) + " attempt(s) to " +
                                   endpoint_,
                               request.query_id, request.view_index, attempt);
        }
        std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
        backoff *= options_.backoff_factor;
    }
}

SegmentResponse remote_segment(const std::string& endpoint, const SegmentRequest& request, double timeout_s,
                               int retries) {
    RemoteOptions options;
    options.timeout_s = timeout_s;
    options.retries = retries;
    return RemoteSegmenter(endpoint, options).segment(request);
}

}  // namespace partlift
