// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fracmol/special/fox_h.hpp"
#include "fracmol/special/incomplete.hpp"
#include "fracmol/special/log_gamma.hpp"
#include "fracmol/special/mittag_leffler.hpp"
