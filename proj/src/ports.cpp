// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fasisac Authors

#include "fasisac/ports.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fasisac {

PortPattern::PortPattern(std::vector<int> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) throw std::invalid_argument("PortPattern: empty pattern");
    if (indices_.front() < 0) throw std::invalid_argument("PortPattern: negative port index");
    for (std::size_t i = 1; i < indices_.size(); ++i) {
        if (indices_[i] <= indices_[i - 1]) {
            throw std::invalid_argument("PortPattern: indices must be strictly increasing");
        }
    }
}

PortPattern PortPattern::mirrored() const {
    std::vector<int> out;
    out.reserve(indices_.size());
    const int lo = front();
    const int hi = back();
    for (auto it = indices_.rbegin(); it != indices_.rend(); ++it) out.push_back(lo + hi - *it);
    return PortPattern(std::move(out));
}

std::string PortPattern::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (i) os << ',';
        os << indices_[i];
    }
    os << ']';
    return os.str();
}

PortPattern PortPattern::parse(const std::string& text) {
    std::string body = text;
    body.erase(std::remove_if(body.begin(), body.end(),
                              [](char c) { return c == '[' || c == ']' || c == ' ' || c == '\t'; }),
               body.end());
    std::vector<int> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const int value = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument("PortPattern::parse: bad index '" + item + "'");
        out.push_back(value);
    }
    return PortPattern(std::move(out));
}

PortPattern PortPattern::contiguous(int m) {
    if (m < 1) throw std::invalid_argument("PortPattern::contiguous: m must be >= 1");
    std::vector<int> out(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = i;
    return PortPattern(std::move(out));
}

} // namespace fasisac
