// Copyright 2026 The flexsched Authors
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

// HTTP/JSON routes over a PlanService.
//
//   POST /plans                                  201 {plan_id, status, gap, objective_eur}
//   GET  /plans                                  200 [summary]
//   GET  /plans/active                           200 plan | 404
//   GET  /plans/{id}                             200 plan | 404
//   GET  /plans/{id}/recommendations             200 [recommendation]
//   POST /plans/{id}/recommendations/{n}/ack     200 | 404 | 409
//   POST /measurements                           201 | 422
//   POST /plans/{id}/reoptimize                  202 {job_id} | 404 | 409
//   GET  /jobs/{id}                              200 {status: pending|done|failed}
//   GET  /plans/{id}/evaluation?measurements=a,b 200 report

#ifndef FLEXSCHED_HTTP_HPP_
#define FLEXSCHED_HTTP_HPP_

#include "httplib.h"

#include "flexsched/service.hpp"

namespace flexsched {

void RegisterRoutes(httplib::Server& server, PlanService& service);

}  // namespace flexsched

#endif  // FLEXSCHED_HTTP_HPP_
