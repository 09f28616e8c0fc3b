#pragma once
// Execution-mode switch for the data-parallel kernels.  Every kernel has a
// serial reference implementation and an OpenMP one; both produce bit-identical
// results (work is grouped by output key and summed in a fixed order), so the
// mode only affects wall time.

namespace gkd::par {

enum class Mode { serial, openmp };

Mode& mode();          // process-wide; defaults to openmp when compiled with it
int hardware_threads();

}  // namespace gkd::par
