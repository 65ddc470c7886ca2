// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "lrtf/cp.hpp"
#include "lrtf/image_io.hpp"
#include "lrtf/metrics.hpp"
#include "lrtf/mog.hpp"
#include "lrtf/numeric.hpp"
#include "lrtf/synthetic.hpp"
#include "lrtf/tensor.hpp"
#include "lrtf/tensor_io.hpp"
#include "lrtf/tucker.hpp"
