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

// CSV point files. Sources: x,y,z,q_re,q_im. Observers: x,y,z.
// Potentials: x,y,z,u_re,u_im. Values are written with 17 significant
// digits, so a write/read cycle is bit-exact.

#ifndef PIM_CLI_POINTS_CSV_HPP_
#define PIM_CLI_POINTS_CSV_HPP_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pim/model.hpp"

namespace pim::cli {

std::string format_double(double v);

SourcePointSet read_sources_csv(std::istream& in, const std::string& origin);
ObserverPointSet read_observers_csv(std::istream& in,
                                    const std::string& origin);
void write_sources_csv(std::ostream& out, const SourcePointSet& src);
void write_observers_csv(std::ostream& out, const ObserverPointSet& obs);
void write_potential_csv(std::ostream& out, const ObserverPointSet& obs,
                         const std::vector<Complex>& u);

// File variants; failures to open, read or write raise IoError.
SourcePointSet read_sources_csv(const std::string& path);
ObserverPointSet read_observers_csv(const std::string& path);
void write_sources_csv(const std::string& path, const SourcePointSet& src);
void write_observers_csv(const std::string& path, const ObserverPointSet& obs);
void write_potential_csv(const std::string& path, const ObserverPointSet& obs,
                         const std::vector<Complex>& u);

}  // namespace pim::cli

#endif  // PIM_CLI_POINTS_CSV_HPP_
