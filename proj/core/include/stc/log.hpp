#pragma once

namespace stc {

/// Routes spdlog to stderr and sets its level from STC_LOG (error | warn | info | debug).
/// Unset or unknown values leave the level at info.
void init_logging();

}  // namespace stc
