// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "hmt/config.hpp"

namespace hmt {

// Each run_* writes a CSV whose '#' header block carries the full canonical
// configuration (re-runnable), the channel-split convention note, mode flags,
// and a status-bits legend. Output is byte-deterministic for a given config.
// The return value is the OR of all per-row status flags.
unsigned run_fig2(const ExperimentConfig& cfg, std::ostream& os);
unsigned run_fig3(const ExperimentConfig& cfg, std::ostream& os);
unsigned run_fig4(const ExperimentConfig& cfg, std::ostream& os);
unsigned run_fig5(const ExperimentConfig& cfg, std::ostream& os);

// Long-format sweep over one axis ("snr" | "vartheta" | "rms_ratio").
unsigned run_sweep(const ExperimentConfig& cfg, const std::string& axis,
                   std::ostream& os);

}  // namespace hmt
