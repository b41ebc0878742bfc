// Copyright 2026 The h2qed Authors
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

#include "h2qed/analysis.hpp"
#include "h2qed/builders.hpp"
#include "h2qed/cli.hpp"
#include "h2qed/csv.hpp"
#include "h2qed/estimate.hpp"
#include "h2qed/experiments.hpp"
#include "h2qed/noise.hpp"
#include "h2qed/postselect.hpp"
#include "h2qed/qcore.hpp"
#include "h2qed/shot_table.hpp"
#include "h2qed/sim.hpp"
