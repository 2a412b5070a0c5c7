// Copyright 2026 The PQC Ensemble Authors
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

#include "pqc/ensemble.hpp"
#include "pqc/error.hpp"
#include "pqc/exec.hpp"
#include "pqc/fourier.hpp"
#include "pqc/full_state.hpp"
#include "pqc/gates.hpp"
#include "pqc/grover.hpp"
#include "pqc/layout.hpp"
#include "pqc/rng.hpp"
#include "pqc/shor.hpp"
#include "pqc/spectrometer.hpp"
#include "pqc/state.hpp"
