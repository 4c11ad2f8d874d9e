// Copyright 2026 The bell-kernels Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "bell/core.hpp"
#include "bell/correlators.hpp"
#include "bell/kernels.hpp"
#include "bell/lhv.hpp"
#include "bell/quantum.hpp"
#include "bell/serialization.hpp"
#include "bell/tightness.hpp"
