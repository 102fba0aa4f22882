// Copyright 2026 The udesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "udesign/coefficients.hpp"
#include "udesign/ensembles.hpp"
#include "udesign/errors.hpp"
#include "udesign/linalg.hpp"
#include "udesign/metrics.hpp"
#include "udesign/moment_map.hpp"
#include "udesign/parallel.hpp"
#include "udesign/rng.hpp"
#include "udesign/version.hpp"
