// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The arraydiag authors

#ifndef ARRAYDIAG_VERSION_HPP
#define ARRAYDIAG_VERSION_HPP

namespace arraydiag {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace arraydiag

#endif // ARRAYDIAG_VERSION_HPP
