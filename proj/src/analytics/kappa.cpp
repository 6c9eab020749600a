// Copyright 2026 The Tutorguard Authors
// SPDX-License-Identifier: Apache-2.0

#include "tutorguard/analytics/kappa.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace tutorguard::analytics {

double cohen_kappa(ConfusionMatrix const & counts)
{
    std::size_t const k = counts.size();
    std::vector<std::uint64_t> rows(k, 0);
    std::vector<std::uint64_t> cols(k, 0);
    std::uint64_t n = 0;
    std::uint64_t agree = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (counts[i].size() != k) {
            throw AnalyticsError("kappa: confusion matrix must be square");
        }
        for (std::size_t j = 0; j < k; ++j) {
            rows[i] += counts[i][j];
            cols[j] += counts[i][j];
            n += counts[i][j];
        }
        agree += counts[i][i];
    }
    if (n < 2) {
        throw AnalyticsError(fmt::format("kappa needs at least 2 observations, got {}", n));
    }
    // Products stay exact in long double for any realistic table; the
    // final division is the only rounding step.
    long double chance = 0;
    for (std::size_t i = 0; i < k; ++i) {
        chance += static_cast<long double>(rows[i]) * static_cast<long double>(cols[i]);
    }
    long double const nn = static_cast<long double>(n) * static_cast<long double>(n);
    if (chance == nn) {
        throw AnalyticsError("kappa undefined: chance agreement is 1 (both raters constant)");
    }
    long double const num = static_cast<long double>(n) * static_cast<long double>(agree) - chance;
    return static_cast<double>(num / (nn - chance));
}

double cohen_kappa(std::span<int const> a, std::span<int const> b)
{
    if (a.size() != b.size()) {
        throw AnalyticsError(fmt::format("kappa: rater vectors differ in length ({} vs {})",
                                         a.size(), b.size()));
    }
    std::map<int, std::size_t> index;
    for (int v : a) index.emplace(v, 0);
    for (int v : b) index.emplace(v, 0);
    std::size_t next = 0;
    for (auto & [v, i] : index) i = next++;
    ConfusionMatrix counts(index.size(), std::vector<std::uint64_t>(index.size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++counts[index.at(a[i])][index.at(b[i])];
    }
    return cohen_kappa(counts);
}

namespace {

template <typename F>
double kappa_mapped(std::span<Category const> a, std::span<Category const> b, F map)
{
    std::vector<int> ca;
    std::vector<int> cb;
    ca.reserve(a.size());
    cb.reserve(b.size());
    for (auto c : a) ca.push_back(map(c));
    for (auto c : b) cb.push_back(map(c));
    return cohen_kappa(std::span<int const>(ca), std::span<int const>(cb));
}

} // namespace

double cohen_kappa(std::span<Category const> a, std::span<Category const> b)
{
    return kappa_mapped(a, b, [](Category c) { return static_cast<int>(c); });
}

double cohen_kappa_collapsed(std::span<Category const> a, std::span<Category const> b)
{
    return kappa_mapped(a, b, [](Category c) { return static_cast<int>(top_level(c)); });
}

double binary_kappa(std::span<Category const> a, std::span<Category const> b, Category target)
{
    return kappa_mapped(a, b, [target](Category c) { return c == target ? 1 : 0; });
}

double binary_kappa(std::span<Category const> a, std::span<Category const> b, TopCategory target)
{
    return kappa_mapped(a, b, [target](Category c) { return top_level(c) == target ? 1 : 0; });
}

} // namespace tutorguard::analytics
