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

#pragma once

#include <string>

#include "partlift/gateway/segmenter.hpp"

namespace partlift {

struct RemoteOptions {
    double timeout_s = 120.0;
    /// Additional attempts after the first on connect/timeout failures.
    int retries = 2;
    double initial_backoff_s = 1.0;
    double backoff_factor = 2.0;
};

/// HTTP client for a segmenter service speaking the JSON/RLE protocol.
/// `endpoint` is a base URL such as http://host:8000; requests go to
/// <endpoint>/segment. Each call uses its own connection.
class RemoteSegmenter final : public Segmenter {
public:
    explicit RemoteSegmenter(std::string endpoint, RemoteOptions options = {});

    SegmentResponse segment(const SegmentRequest& request) const override;

    const std::string& endpoint() const { return endpoint_; }

private:
    std::string endpoint_;
    std::string host_;
    std::string path_prefix_;
    RemoteOptions options_;
};

SegmentResponse remote_segment(const std::string& endpoint,
                               const SegmentRequest& request,
                               double timeout_s = 120.0,
                               int retries = 2);

}  // namespace partlift
