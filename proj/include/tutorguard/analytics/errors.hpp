// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace tutorguard::analytics {

/// A statistic is undefined for the given data (zero variance, too few
/// observations, missing cells, ...). The message names the culprit.
class AnalyticsError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace tutorguard::analytics
