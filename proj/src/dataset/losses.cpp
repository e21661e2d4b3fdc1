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

#include "partlift/dataset/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace partlift {

void LossConfig::validate() const {
    for (double w : {txt, mask, bce, dice}) {
        if (!(w >= 0.0)) throw std::invalid_argument("loss weights must be nonnegative");
    }
    if (txt == 0.0 && mask == 0.0 && bce == 0.0 && dice == 0.0) {
        throw std::invalid_argument("at least one loss weight must be positive");
    }
}

namespace {

double clamp_probability(double p) { return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp); }

}  // namespace

MaskLossTerms mask_loss_terms(std::span<const double> pred, const Mask& target) {
    if (pred.size() != target.pixel_count()) {
        throw std::invalid_argument("mask loss: prediction has " + std::to_string(pred.size()) + " pixels, target " +
                                    std::to_string(target.pixel_count()));
    }
    if (pred.empty()) throw std::invalid_argument("mask loss: empty buffers");
    double bce = 0.0, overlap = 0.0, pred_sum = 0.0, target_sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!(pred[i] >= 0.0 && pred[i] <= 1.0)) throw std::invalid_argument("mask loss: prediction outside [0, 1]");
        const double p = clamp_probability(pred[i]);
        const double t = target[i] ? 1.0 : 0.0;
        bce -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
        overlap += p * t;
        pred_sum += p;
        target_sum += t;
    }
    MaskLossTerms terms;
    terms.bce = bce / static_cast<double>(pred.size());
    terms.dice = 1.0 - (2.0 * overlap + kDiceSmoothing) / (pred_sum + target_sum + kDiceSmoothing);
    return terms;
}

double mask_loss(std::span<const double> pred, const Mask& target, const LossConfig& config) {
    config.validate();
    const auto terms = mask_loss_terms(pred, target);
    return config.bce * terms.bce + config.dice * terms.dice;
}

double text_loss(const std::vector<std::vector<double>>& distributions, std::span<const int> target_tokens) {
    if (distributions.size() != target_tokens.size()) {
        throw std::invalid_argument("text loss: " + std::to_string(distributions.size()) + " distributions for " +
                                    std::to_string(target_tokens.size()) + " targets");
    }
    if (distributions.empty()) throw std::invalid_argument("text loss: empty sequence");
    double total = 0.0;
    for (std::size_t t = 0; t < distributions.size(); ++t) {
        const auto& dist = distributions[t];
        double sum = 0.0;
        for (double p : dist) {
            if (!(p >= 0.0)) throw std::invalid_argument("text loss: negative probability at position " + std::to_string(t));
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw std::invalid_argument("text loss: distribution at position " + std::to_string(t) + " sums to " +
                                        std::to_string(sum));
        }
        const int token = target_tokens[t];
        if (token < 0 || static_cast<std::size_t>(token) >= dist.size()) {
            throw std::invalid_argument("text loss: target token out of vocabulary at position " + std::to_string(t));
        }
        total -= std::log(clamp_probability(dist[static_cast<std::size_t>(token)]));
    }
    return total / static_cast<double>(distributions.size());
}

double total_loss(double text, double mask, const LossConfig& config) {
    config.validate();
    return config.txt * text + config.mask * mask;
}

}  // namespace partlift
