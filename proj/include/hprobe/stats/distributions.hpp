// Copyright 2026 The hprobe Authors
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

namespace hprobe::stats {

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// 1 - I_x(a, b), evaluated without cancellation.
double incomplete_beta_complement(double a, double b, double x);

/// Upper tail P(T > t) of Student's t with `df` degrees of freedom.
double t_tail(double t, double df);

/// Two-sided P(|T| > |t|).
double t_two_sided(double t, double df);

/// Upper tail P(F > f) of Snedecor's F(df1, df2).
double f_tail(double f, double df1, double df2);

}  // namespace hprobe::stats
