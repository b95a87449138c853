#pragma once

#include "freqseg/engine.hpp"

namespace freqseg {

/// Panel showing the phase of `t` (zero frequency centred, dimmed) with an
/// arrow for the decoded translation, scaled by `arrow_scale` px per px/frame.
RealField motion_panel(const ComplexField& t, double arrow_scale = 8.0);

/// One montage row: [observed | predicted | FG | BG | A | T]. A missing
/// observation renders as a black panel.
RealField montage_row(const StepReport& step, const RealField* observed);

}  // namespace freqseg
