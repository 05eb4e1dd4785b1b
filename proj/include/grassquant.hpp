// Copyright 2026 The grassquant Authors. All Rights Reserved.
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

#ifndef GRASSQUANT_GRASSQUANT_HPP_
#define GRASSQUANT_GRASSQUANT_HPP_

#include "grassquant/codebook.hpp"
#include "grassquant/codebook_io.hpp"
#include "grassquant/config.hpp"
#include "grassquant/errors.hpp"
#include "grassquant/experiments.hpp"
#include "grassquant/field.hpp"
#include "grassquant/mimo.hpp"
#include "grassquant/montecarlo.hpp"
#include "grassquant/parallel.hpp"
#include "grassquant/plane.hpp"
#include "grassquant/random.hpp"
#include "grassquant/volume.hpp"

#endif  // GRASSQUANT_GRASSQUANT_HPP_
