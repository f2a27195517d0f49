// Copyright 2026 The pasearch Authors
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

#include "pasearch/dynamics.hpp"
#include "pasearch/errors.hpp"
#include "pasearch/numerics.hpp"
#include "pasearch/schedule.hpp"
#include "pasearch/spectral.hpp"
#include "pasearch/sweep.hpp"
#include "pasearch/verify.hpp"
