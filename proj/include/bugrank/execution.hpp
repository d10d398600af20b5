#pragma once

namespace bugrank {

/// Selects the serial reference or the OpenMP version of a kernel.
enum class Execution { Serial, Parallel };

}  // namespace bugrank
