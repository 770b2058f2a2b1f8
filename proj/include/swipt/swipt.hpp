// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SWIPT_SWIPT_HPP
#define SWIPT_SWIPT_HPP

#include "swipt/types.hpp"
#include "swipt/channel_model.hpp"
#include "swipt/allocation_core.hpp"
#include "swipt/policy_su_dl.hpp"
#include "swipt/policy_su_ul.hpp"
#include "swipt/policy_mu_dl.hpp"
#include "swipt/policy_mu_ul.hpp"
#include "swipt/policy.hpp"
#include "swipt/oracle.hpp"
#include "swipt/simulator.hpp"

#endif // SWIPT_SWIPT_HPP
