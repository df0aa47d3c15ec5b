// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

namespace evalagent {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Command-line entry point. Subcommands: evaluate, validate,
/// calibrate-tiers, compare, recommend, replay-trace. Returns 0 on success,
/// 1 on a domain error and 2 on a usage error (synopsis on `err`).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace evalagent
