/* Copyright 2026 The PIM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PIM_PIM_HPP_
#define PIM_PIM_HPP_

#include "pim/direct.hpp"
#include "pim/error.hpp"
#include "pim/far_zone.hpp"
#include "pim/grid.hpp"
#include "pim/model.hpp"
#include "pim/near_zone.hpp"
#include "pim/pgf.hpp"
#include "pim/solver.hpp"
#include "pim/special_functions.hpp"
#include "pim/transform.hpp"

#endif  // PIM_PIM_HPP_
