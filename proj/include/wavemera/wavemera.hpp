// Copyright 2026 The wavemera Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "wavemera/bounds.hpp"
#include "wavemera/dwt.hpp"
#include "wavemera/error.hpp"
#include "wavemera/fermion1d.hpp"
#include "wavemera/fermion2d.hpp"
#include "wavemera/filters.hpp"
#include "wavemera/io.hpp"
#include "wavemera/laurent.hpp"
#include "wavemera/sequence.hpp"
#include "wavemera/spectral.hpp"
