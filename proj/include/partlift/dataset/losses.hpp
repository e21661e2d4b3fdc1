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

#include <span>
#include <vector>

#include "partlift/render/image.hpp"

namespace partlift {

/// Weights of the combined objective L = txt * L_txt + mask * L_mask with
/// L_mask = bce * BCE + dice * DICE.
struct LossConfig {
    double txt = 1.0;
    double mask = 1.0;
    double bce = 2.0;
    double dice = 0.5;

    /// Throws std::invalid_argument for negative or all-zero weights.
    void validate() const;
};

inline constexpr double kProbabilityClamp = 1e-7;
inline constexpr double kDiceSmoothing = 1.0;

struct MaskLossTerms {
    double bce = 0.0;
    double dice = 0.0;
};

/// Unweighted BCE and DICE between per-pixel probabilities and a binary
/// target. Probabilities are clamped to [1e-7, 1 - 1e-7].
MaskLossTerms mask_loss_terms(std::span<const double> pred, const Mask& target);

/// config.bce * BCE + config.dice * DICE.
double mask_loss(std::span<const double> pred, const Mask& target, const LossConfig& config = {});

/// Mean negative log-likelihood of the target tokens. Each distribution
/// must sum to 1 within 1e-6.
double text_loss(const std::vector<std::vector<double>>& distributions, std::span<const int> target_tokens);

double total_loss(double text, double mask, const LossConfig& config = {});

}  // namespace partlift
