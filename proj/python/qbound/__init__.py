# Copyright 2026 The qbound Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Channel fidelity, Bures and SLD-Fisher SDPs with discrimination and estimation bounds."""

from ._core import (  # noqa: F401
    BoundReport,
    ChannelFamily,
    ChannelPair,
    KrausChannel,
    QboundError,
    adaptive_bures_bound,
    adaptive_fisher_bound,
    builtin_channel,
    builtin_family,
    bures_sq,
    classify_scaling,
    diamond_norm_exact,
    error_prob_floor,
    est_query_lower,
    parallel_bures_bound,
    parallel_fisher_bound,
    parse_channel_spec,
    probe_fisher_max,
    quadratic_min_n,
    query_lower_bound,
    root_fidelity,
    sld_fisher_channel,
)

__version__ = "0.1.0"
