/*
   Copyright 2026 The phasecool Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "phasecool/config.hpp"
#include "phasecool/density_matrix.hpp"
#include "phasecool/error.hpp"
#include "phasecool/experiment.hpp"
#include "phasecool/io.hpp"
#include "phasecool/lattice.hpp"
#include "phasecool/metrics.hpp"
#include "phasecool/phase_space.hpp"
#include "phasecool/philox.hpp"
#include "phasecool/pulse.hpp"
#include "phasecool/quantum.hpp"
#include "phasecool/semiclassical.hpp"
#include "phasecool/units.hpp"
